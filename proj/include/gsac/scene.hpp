#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsac/geometry.hpp"

namespace gsac {

enum class FurnitureGroup : int { Bed = 0, Chair, Decor, Picture, Sofa, Storage, Table, TV };

inline constexpr int kGroupCount = 8;
inline constexpr std::array<FurnitureGroup, kGroupCount> kAllGroups{
    FurnitureGroup::Bed,     FurnitureGroup::Chair,   FurnitureGroup::Decor, FurnitureGroup::Picture,
    FurnitureGroup::Sofa,    FurnitureGroup::Storage, FurnitureGroup::Table, FurnitureGroup::TV};

constexpr int group_index(FurnitureGroup g) { return static_cast<int>(g); }
FurnitureGroup group_from_index(int index);
std::string_view group_name(FurnitureGroup g);
/// Case-sensitive label lookup ("Bed", "TV", ...).
std::optional<FurnitureGroup> parse_group(std::string_view label);

struct SceneObject {
    std::string id;
    FurnitureGroup group = FurnitureGroup::Bed;
    BoundingBox3 bbox;

    Vec3 centroid() const { return bbox.centroid(); }
    Vec2 centroid_xy() const { return bbox.centroid().xy(); }
};

struct Wall {
    std::string id;
    Segment2 segment;
};

/// A single room: closed loop of walls, label, and furniture.
class Scene {
public:
    Scene() = default;
    /// Validates the wall loop (>= 3 walls, endpoints chained, simple, positive area).
    Scene(std::string id, std::string room_type, std::vector<Wall> walls, std::vector<SceneObject> objects);

    const std::string& id() const { return id_; }
    const std::string& room_type() const { return room_type_; }
    const std::vector<Wall>& walls() const { return walls_; }
    const std::vector<SceneObject>& objects() const { return objects_; }
    const std::vector<Vec2>& floor() const { return floor_; }
    const Rect2& bounds() const { return bounds_; }
    double floor_area() const { return floor_area_; }
    Vec2 center() const { return center_; }

    bool contains_xy(Vec2 p) const { return point_in_polygon(p, floor_); }
    const SceneObject* find(std::string_view object_id) const;

    Scene with_objects(std::vector<SceneObject> objects) const;
    Scene without_object(std::string_view object_id) const;
    Scene translated(Vec3 offset) const;

private:
    std::string id_;
    std::string room_type_;
    std::vector<Wall> walls_;
    std::vector<SceneObject> objects_;
    std::vector<Vec2> floor_;
    Rect2 bounds_;
    double floor_area_ = 0.0;
    Vec2 center_;
};

/// Axis-aligned rectangular room with walls named w0..w3 counter-clockwise from the x axis.
Scene make_rect_room(std::string id, std::string room_type, double length_x, double width_y,
                     std::vector<SceneObject> objects = {});

/// Shortest distance between the closed boxes, 0 when they intersect.
double bbox_distance(const BoundingBox3& a, const BoundingBox3& b);
/// Shortest distance between the box footprint and the wall segment in the floor plane.
double bbox_wall_distance(const BoundingBox3& b, const Wall& w);
/// True iff the ground footprints overlap or touch.
bool bbox_xy_intersects(const BoundingBox3& a, const BoundingBox3& b);

/// Fraction of the floor not covered by any object footprint, estimated on a resolution x resolution
/// raster over the room's bounding rectangle.
double open_space_ratio(const Scene& s, int resolution = 512);

}  // namespace gsac
