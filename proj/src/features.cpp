#include "gsac/features.hpp"

#include <algorithm>
#include <cmath>

#include "gsac/error.hpp"

namespace gsac {

void FeatureParams::validate() const {
    if (!(rho_fraction > 0.0 && rho_fraction < 1.0)) throw DataError("rho_fraction must lie in (0, 1)");
    if (!(support_tau > 0.0)) throw DataError("support_tau must be positive");
}

double wall_rho(const Wall& w, const Scene& s, const FeatureParams& p) {
    const Rect2 r = s.bounds();
    const double extent_x = r.max.x - r.min.x;
    const double extent_y = r.max.y - r.min.y;
    if (p.single_rho) return p.rho_fraction * std::min(extent_x, extent_y);
    const Vec2 d = w.segment.b - w.segment.a;
    // A wall running along x is approached across the room's y extent, and vice versa.
    return std::abs(d.x) >= std::abs(d.y) ? p.rho_fraction * extent_y : p.rho_fraction * extent_x;
}

bool near_wall(const SceneObject& o, const Wall& w, const Scene& s, const FeatureParams& p) {
    return bbox_wall_distance(o.bbox, w) < wall_rho(w, s, p);
}

int room_position(const SceneObject& o, const Scene& s, const FeatureParams& p) {
    int count = 0;
    for (const auto& w : s.walls()) count += near_wall(o, w, s, p) ? 1 : 0;
    return count;
}

RoomPosition classify_room_position(int near_walls) {
    if (near_walls >= 2) return RoomPosition::Corner;
    if (near_walls == 1) return RoomPosition::Edge;
    return RoomPosition::Middle;
}

double avg_dist(const SceneObject& o, FurnitureGroup g, const Scene& s) {
    double total = 0.0;
    int count = 0;
    for (const auto& other : s.objects()) {
        if (other.group != g || other.id == o.id) continue;
        total += bbox_distance(o.bbox, other.bbox);
        ++count;
    }
    return count == 0 ? 0.0 : total / count;
}

double proximity_radius(const BoundingBox3& b) { return std::hypot(b.length(), b.width()); }

bool surrounds(const SceneObject& o, const SceneObject& other) {
    return bbox_distance(o.bbox, other.bbox) < proximity_radius(o.bbox);
}

int surrounded_by(const SceneObject& o, FurnitureGroup g, const Scene& s) {
    int count = 0;
    for (const auto& other : s.objects()) {
        if (other.group != g || other.id == o.id) continue;
        count += surrounds(o, other) ? 1 : 0;
    }
    return count;
}

GroupWallCounts intersect_xy_counts(const SceneObject& o, const Scene& s) {
    GroupWallCounts counts{};
    for (const auto& other : s.objects()) {
        if (other.id == o.id) continue;
        if (bbox_xy_intersects(o.bbox, other.bbox)) ++counts[static_cast<std::size_t>(group_index(other.group))];
    }
    for (const auto& w : s.walls()) {
        if (bbox_wall_distance(o.bbox, w) == 0.0) ++counts[kGroupCount];
    }
    return counts;
}

int support_sign(const SceneObject& top_candidate, const SceneObject& other, const FeatureParams& p) {
    if (!bbox_xy_intersects(top_candidate.bbox, other.bbox)) return 0;
    const double up_gap = top_candidate.bbox.bottom() - other.bbox.top();
    const double down_gap = other.bbox.bottom() - top_candidate.bbox.top();
    const bool rests_on = up_gap >= 0.0 && up_gap < p.support_tau;
    const bool carries = down_gap >= 0.0 && down_gap < p.support_tau;
    // Both can only hold for two flat boxes at the same height.
    if (rests_on == carries) return 0;
    return rests_on ? 1 : -1;
}

namespace {

GroupWallCounts support_counts(const SceneObject& o, const Scene& s, const FeatureParams& p, int sign) {
    GroupWallCounts counts{};
    for (const auto& other : s.objects()) {
        if (other.id == o.id) continue;
        if (support_sign(o, other, p) == sign) ++counts[static_cast<std::size_t>(group_index(other.group))];
    }
    return counts;
}

}  // namespace

GroupWallCounts supp_by_counts(const SceneObject& o, const Scene& s, const FeatureParams& p) {
    return support_counts(o, s, p, +1);
}

GroupWallCounts supp_to_counts(const SceneObject& o, const Scene& s, const FeatureParams& p) {
    return support_counts(o, s, p, -1);
}

std::vector<const SceneObject*> objects_by_distance(const SceneObject& o, const Scene& s) {
    std::vector<std::pair<double, const SceneObject*>> ranked;
    ranked.reserve(s.objects().size());
    for (const auto& other : s.objects()) {
        if (other.id == o.id) continue;
        ranked.emplace_back(bbox_distance(o.bbox, other.bbox), &other);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second->id < b.second->id;
    });
    std::vector<const SceneObject*> out;
    out.reserve(ranked.size());
    for (const auto& [d, obj] : ranked) out.push_back(obj);
    return out;
}

std::array<double, 3> three_closest(const SceneObject& o, const Scene& s) {
    std::array<double, 3> codes{};
    const auto ranked = objects_by_distance(o, s);
    for (std::size_t i = 0; i < std::min<std::size_t>(3, ranked.size()); ++i) {
        codes[i] = group_index(ranked[i]->group) + 1;
    }
    return codes;
}

SummaryVector summary_vector(const SceneObject& o, const Scene& s, const FeatureParams& p) {
    using namespace summary;
    SummaryVector x{};
    const auto closest = three_closest(o, s);
    std::copy(closest.begin(), closest.end(), x.begin() + kThreeClosest);

    switch (classify_room_position(room_position(o, s, p))) {
        case RoomPosition::Edge: x[kEdge] = 1.0; break;
        case RoomPosition::Corner: x[kCorner] = 1.0; break;
        case RoomPosition::Middle: break;
    }

    for (FurnitureGroup g : kAllGroups) {
        const auto gi = static_cast<std::size_t>(group_index(g));
        x[kAvgDist + gi] = avg_dist(o, g, s);
        x[kSurrounded + gi] = surrounded_by(o, g, s);
    }

    const auto ix = intersect_xy_counts(o, s);
    const auto sby = supp_by_counts(o, s, p);
    const auto sto = supp_to_counts(o, s, p);
    for (std::size_t i = 0; i < ix.size(); ++i) {
        x[kIntersect + i] = ix[i];
        x[kSuppBy + i] = sby[i];
        x[kSuppTo + i] = sto[i];
    }
    return x;
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
    if (mean_.size() != summary::kSize || stddev_.size() != summary::kSize) {
        throw DataError("standardizer statistics must have 48 entries");
    }
}

Standardizer Standardizer::fit(std::span<const SummaryVector> rows) {
    if (rows.size() < 2) throw DataError("standardizer needs at least 2 summary vectors");
    std::vector<double> mean(summary::kSize, 0.0);
    std::vector<double> stddev(summary::kSize, 0.0);
    const auto n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < summary::kSize; ++d) mean[d] += r[d];
    }
    for (double& m : mean) m /= n;
    for (const auto& r : rows) {
        for (std::size_t d = 0; d < summary::kSize; ++d) stddev[d] += (r[d] - mean[d]) * (r[d] - mean[d]);
    }
    for (double& sd : stddev) sd = std::sqrt(sd / (n - 1));
    return Standardizer(std::move(mean), std::move(stddev));
}

SummaryVector Standardizer::apply(const SummaryVector& v) const {
    if (!fitted()) throw ComputeError("standardizer used before fitting");
    SummaryVector out{};
    for (std::size_t d = 0; d < summary::kSize; ++d) {
        const double centered = v[d] - mean_[d];
        out[d] = stddev_[d] < kMinStd ? centered : centered / stddev_[d];
    }
    return out;
}

}  // namespace gsac
