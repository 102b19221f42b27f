#include "gsac/scene.hpp"

#include <algorithm>
#include <cmath>

#include "gsac/error.hpp"

namespace gsac {

namespace {
constexpr std::array<std::string_view, kGroupCount> kGroupNames{"Bed",  "Chair",   "Decor", "Picture",
                                                                 "Sofa", "Storage", "Table", "TV"};
}

FurnitureGroup group_from_index(int index) {
    if (index < 0 || index >= kGroupCount) throw DataError("furniture group index out of range");
    return static_cast<FurnitureGroup>(index);
}

std::string_view group_name(FurnitureGroup g) { return kGroupNames[static_cast<std::size_t>(group_index(g))]; }

std::optional<FurnitureGroup> parse_group(std::string_view label) {
    for (int i = 0; i < kGroupCount; ++i) {
        if (kGroupNames[static_cast<std::size_t>(i)] == label) return group_from_index(i);
    }
    return std::nullopt;
}

Scene::Scene(std::string id, std::string room_type, std::vector<Wall> walls, std::vector<SceneObject> objects)
    : id_(std::move(id)), room_type_(std::move(room_type)), walls_(std::move(walls)), objects_(std::move(objects)) {
    if (walls_.size() < 3) throw DataError("scene '" + id_ + "': needs at least 3 walls");
    for (std::size_t i = 0; i < walls_.size(); ++i) {
        const Wall& w = walls_[i];
        if (w.segment.a == w.segment.b) {
            throw DataError("scene '" + id_ + "': wall '" + w.id + "' has coincident endpoints");
        }
        if (!(w.segment.b == walls_[(i + 1) % walls_.size()].segment.a)) {
            throw DataError("scene '" + id_ + "': wall loop is open after wall '" + w.id + "'");
        }
        floor_.push_back(w.segment.a);
    }
    if (!polygon_is_simple(floor_)) throw DataError("scene '" + id_ + "': wall polygon self-intersects");
    floor_area_ = std::abs(polygon_signed_area(floor_));
    if (!(floor_area_ > 0.0)) throw DataError("scene '" + id_ + "': floor polygon has zero area");
    bounds_ = polygon_bounds(floor_);
    center_ = polygon_centroid(floor_);
}

const SceneObject* Scene::find(std::string_view object_id) const {
    for (const auto& o : objects_) {
        if (o.id == object_id) return &o;
    }
    return nullptr;
}

Scene Scene::with_objects(std::vector<SceneObject> objects) const {
    Scene s = *this;
    s.objects_ = std::move(objects);
    return s;
}

Scene Scene::without_object(std::string_view object_id) const {
    std::vector<SceneObject> kept;
    kept.reserve(objects_.size());
    for (const auto& o : objects_) {
        if (o.id != object_id) kept.push_back(o);
    }
    return with_objects(std::move(kept));
}

Scene Scene::translated(Vec3 offset) const {
    const Vec2 d = offset.xy();
    std::vector<Wall> walls = walls_;
    for (auto& w : walls) w.segment = {w.segment.a + d, w.segment.b + d};
    std::vector<SceneObject> objects = objects_;
    for (auto& o : objects) o.bbox = o.bbox.translated(offset);
    return Scene(id_, room_type_, std::move(walls), std::move(objects));
}

Scene make_rect_room(std::string id, std::string room_type, double length_x, double width_y,
                     std::vector<SceneObject> objects) {
    const std::array<Vec2, 4> c{Vec2{0, 0}, Vec2{length_x, 0}, Vec2{length_x, width_y}, Vec2{0, width_y}};
    std::vector<Wall> walls;
    for (std::size_t i = 0; i < 4; ++i) {
        walls.push_back({"w" + std::to_string(i), Segment2{c[i], c[(i + 1) % 4]}});
    }
    return Scene(std::move(id), std::move(room_type), std::move(walls), std::move(objects));
}

double bbox_distance(const BoundingBox3& a, const BoundingBox3& b) {
    const double dx = std::max({0.0, b.min().x - a.max().x, a.min().x - b.max().x});
    const double dy = std::max({0.0, b.min().y - a.max().y, a.min().y - b.max().y});
    const double dz = std::max({0.0, b.min().z - a.max().z, a.min().z - b.max().z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double bbox_wall_distance(const BoundingBox3& b, const Wall& w) {
    return rect_segment_distance(b.footprint(), w.segment);
}

bool bbox_xy_intersects(const BoundingBox3& a, const BoundingBox3& b) {
    return a.min().x <= b.max().x && b.min().x <= a.max().x && a.min().y <= b.max().y && b.min().y <= a.max().y;
}

double open_space_ratio(const Scene& s, int resolution) {
    if (resolution < 1) throw DataError("open_space_ratio: resolution must be positive");
    if (!(s.floor_area() > 0.0)) throw DataError("open_space_ratio: degenerate floor polygon");
    const Rect2 r = s.bounds();
    const double cw = (r.max.x - r.min.x) / resolution;
    const double ch = (r.max.y - r.min.y) / resolution;
    const auto& poly = s.floor();
    std::size_t floor_cells = 0;
    std::size_t occupied = 0;
    std::vector<double> crossings;
    std::vector<char> covered(static_cast<std::size_t>(resolution));
    for (int iy = 0; iy < resolution; ++iy) {
        const double y = r.min.y + (iy + 0.5) * ch;
        // Same crossing rule as point_in_polygon, evaluated once per scanline.
        crossings.clear();
        for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
            const Vec2 a = poly[i];
            const Vec2 b = poly[j];
            if ((a.y > y) != (b.y > y)) crossings.push_back(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
        }
        std::sort(crossings.begin(), crossings.end());
        std::fill(covered.begin(), covered.end(), 0);
        for (const auto& o : s.objects()) {
            const Rect2 f = o.bbox.footprint();
            if (y < f.min.y || y > f.max.y) continue;
            const int lo = std::max(0, static_cast<int>(std::floor((f.min.x - r.min.x) / cw - 0.5)));
            const int hi = std::min(resolution - 1, static_cast<int>(std::ceil((f.max.x - r.min.x) / cw - 0.5)));
            for (int ix = lo; ix <= hi; ++ix) {
                const double x = r.min.x + (ix + 0.5) * cw;
                if (x >= f.min.x && x <= f.max.x) covered[static_cast<std::size_t>(ix)] = 1;
            }
        }
        for (int ix = 0; ix < resolution; ++ix) {
            const double x = r.min.x + (ix + 0.5) * cw;
            const auto right = crossings.end() - std::upper_bound(crossings.begin(), crossings.end(), x);
            if (right % 2 == 0) continue;
            ++floor_cells;
            occupied += static_cast<std::size_t>(covered[static_cast<std::size_t>(ix)]);
        }
    }
    if (floor_cells == 0) throw DataError("open_space_ratio: floor polygon covers no raster cell");
    return 1.0 - static_cast<double>(occupied) / static_cast<double>(floor_cells);
}

}  // namespace gsac
