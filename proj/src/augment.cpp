#include "gsac/augment.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "gsac/error.hpp"
#include "gsac/parallel.hpp"

namespace gsac {

void AugmentParams::validate() const {
    if (variants_per_room < 1) throw DataError("variants_per_room must be positive");
    if (!(wall_offset_max > 0.0)) throw DataError("wall_offset_max must be positive");
    if (!(falloff_lambda > 0.0)) throw DataError("falloff_lambda must be positive");
    if (!(open_space_max > 0.0 && open_space_max <= 1.0)) throw DataError("open_space_max must lie in (0, 1]");
    if (!(overlap_max > 0.0 && overlap_max <= 1.0)) throw DataError("overlap_max must lie in (0, 1]");
    if (removal_n < 1) throw DataError("removal_n must be positive");
    if (max_attempts < 1) throw DataError("max_attempts must be positive");
}

std::vector<double> draw_wall_offsets(const Scene& s, const AugmentParams& p, Rng& rng) {
    std::vector<double> offsets(s.walls().size());
    for (double& u : offsets) u = uniform(rng, -p.wall_offset_max, p.wall_offset_max);
    return offsets;
}

namespace {

Vec2 outward_normal(const Segment2& seg, bool ccw) {
    const Vec2 d = seg.b - seg.a;
    const double len = norm(d);
    const Vec2 n{d.y / len, -d.x / len};
    return ccw ? n : Vec2{-n.x, -n.y};
}

/// Displacement of the corner shared by two walls that translate along their normals.
Vec2 corner_shift(Vec2 n1, double u1, Vec2 n2, double u2) {
    const double det = cross(n1, n2);
    if (std::abs(det) < 1e-12) {
        return 0.5 * ((u1 * n1) + (u2 * n2));
    }
    return {(u1 * n2.y - u2 * n1.y) / det, (n1.x * u2 - n2.x * u1) / det};
}

}  // namespace

std::optional<Scene> deform_room(const Scene& s, std::span<const double> offsets, double falloff_lambda) {
    const auto& walls = s.walls();
    const std::size_t n = walls.size();
    if (offsets.size() != n) throw DataError("deform_room: one offset per wall required");
    const bool ccw = polygon_signed_area(s.floor()) > 0.0;

    std::vector<Vec2> normals(n);
    for (std::size_t i = 0; i < n; ++i) normals[i] = outward_normal(walls[i].segment, ccw);

    std::vector<Vec2> corners(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t prev = (i + n - 1) % n;
        corners[i] = walls[i].segment.a + corner_shift(normals[prev], offsets[prev], normals[i], offsets[i]);
    }
    std::vector<Wall> moved = walls;
    for (std::size_t i = 0; i < n; ++i) moved[i].segment = {corners[i], corners[(i + 1) % n]};

    std::vector<SceneObject> objects = s.objects();
    for (auto& o : objects) {
        std::size_t closest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double d = bbox_wall_distance(o.bbox, walls[i]);
            if (d < best) {
                best = d;
                closest = i;
            }
        }
        const double factor = std::exp(-best / falloff_lambda);
        const Vec2 shift = (offsets[closest] * factor) * normals[closest];
        o.bbox = o.bbox.translated({shift.x, shift.y, 0.0});
    }

    try {
        return Scene(s.id(), s.room_type(), std::move(moved), std::move(objects));
    } catch (const DataError&) {
        return std::nullopt;
    }
}

Scene augment_room(const Scene& s, const AugmentParams& p, Rng& rng) {
    for (int attempt = 0; attempt < p.max_attempts; ++attempt) {
        const auto offsets = draw_wall_offsets(s, p, rng);
        if (auto out = deform_room(s, offsets, p.falloff_lambda)) return *std::move(out);
    }
    throw ComputeError("augment_room: no valid deformation of '" + s.id() + "' after " +
                       std::to_string(p.max_attempts) + " draws");
}

bool check_open_space(const Scene& s, const AugmentParams& p) {
    return open_space_ratio(s, p.open_space_resolution) <= p.open_space_max;
}

namespace {

bool pair_overlaps_too_much(const SceneObject& a, const SceneObject& b, const AugmentParams& p) {
    const double inter = box_intersection_volume(a.bbox, b.bbox);
    return inter > p.overlap_max * std::min(a.bbox.volume(), b.bbox.volume());
}

bool smaller_first(const SceneObject& a, const SceneObject& b) {
    if (a.bbox.volume() != b.bbox.volume()) return a.bbox.volume() < b.bbox.volume();
    return a.id < b.id;
}

}  // namespace

bool check_overlaps(const Scene& s, const AugmentParams& p) {
    const auto& objs = s.objects();
    for (std::size_t i = 0; i < objs.size(); ++i) {
        for (std::size_t j = i + 1; j < objs.size(); ++j) {
            if (pair_overlaps_too_much(objs[i], objs[j], p)) return false;
        }
    }
    return true;
}

Scene filter_overlaps(const Scene& s, const AugmentParams& p) {
    std::vector<SceneObject> objs = s.objects();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < objs.size() && !changed; ++i) {
            for (std::size_t j = i + 1; j < objs.size() && !changed; ++j) {
                if (!pair_overlaps_too_much(objs[i], objs[j], p)) continue;
                const std::size_t drop = smaller_first(objs[i], objs[j]) ? i : j;
                objs.erase(objs.begin() + static_cast<std::ptrdiff_t>(drop));
                changed = true;
            }
        }
    }
    return s.with_objects(std::move(objs));
}

std::vector<Scene> iterative_removal(const Scene& s, const AugmentParams& p) {
    std::vector<SceneObject> order = s.objects();
    std::sort(order.begin(), order.end(), smaller_first);
    std::vector<Scene> out;
    for (int removed = 1; removed <= p.removal_n; ++removed) {
        if (order.size() <= static_cast<std::size_t>(removed)) break;
        std::vector<SceneObject> kept;
        for (const auto& o : s.objects()) {
            const auto it = std::find_if(order.begin(), order.begin() + removed,
                                         [&](const SceneObject& r) { return r.id == o.id; });
            if (it == order.begin() + removed) kept.push_back(o);
        }
        Scene derived(s.id() + "_r" + std::to_string(removed), s.room_type(), s.walls(), std::move(kept));
        out.push_back(std::move(derived));
    }
    return out;
}

StageCounts count_stage(std::string name, std::span<const Scene> scenes) {
    StageCounts c;
    c.name = std::move(name);
    c.rooms = scenes.size();
    for (const auto& s : scenes) {
        for (const auto& o : s.objects()) ++c.objects[static_cast<std::size_t>(group_index(o.group))];
    }
    return c;
}

AugmentResult build_augmented_dataset(std::span<const Scene> scenes, const AugmentParams& p) {
    p.validate();
    AugmentResult r;
    r.original.assign(scenes.begin(), scenes.end());

    const auto variants = static_cast<std::size_t>(p.variants_per_room);
    std::vector<Scene> parametric(scenes.size() * variants);
    parallel_for(scenes.size(), [&](std::size_t i) {
        const Scene& src = scenes[i];
        Rng rng = derive_rng(p.seed, src.id());
        for (std::size_t k = 0; k < variants; ++k) {
            Scene v = augment_room(src, p, rng);
            parametric[i * variants + k] =
                Scene(src.id() + "_p" + std::to_string(k), v.room_type(), v.walls(), v.objects());
        }
    });
    r.parametric = std::move(parametric);

    std::vector<std::optional<Scene>> kept(r.parametric.size());
    parallel_for(r.parametric.size(), [&](std::size_t i) {
        Scene f = filter_overlaps(r.parametric[i], p);
        if (!f.objects().empty() && check_open_space(f, p)) kept[i] = std::move(f);
    });
    for (auto& k : kept) {
        if (k) r.filtered.push_back(*std::move(k));
    }

    if (p.removal) {
        for (const auto& s : r.filtered) {
            r.removal.push_back(s);
            // Removing more objects only adds open space, so the first failure ends the chain.
            for (auto& d : iterative_removal(s, p)) {
                if (!check_open_space(d, p)) break;
                r.removal.push_back(std::move(d));
            }
        }
    }

    r.report = {count_stage("original", r.original), count_stage("parametric", r.parametric),
                count_stage("filtered", r.filtered), count_stage("removal", r.removal)};
    return r;
}

void write_stage_report(std::ostream& os, const std::array<StageCounts, 4>& report) {
    os << std::left << std::setw(10) << "group";
    for (const auto& st : report) os << std::right << std::setw(12) << st.name;
    os << '\n';
    for (FurnitureGroup g : kAllGroups) {
        os << std::left << std::setw(10) << group_name(g);
        for (const auto& st : report) os << std::right << std::setw(12) << st.objects[static_cast<std::size_t>(group_index(g))];
        os << '\n';
    }
    os << std::left << std::setw(10) << "Rooms";
    for (const auto& st : report) os << std::right << std::setw(12) << st.rooms;
    os << '\n';
}

}  // namespace gsac
