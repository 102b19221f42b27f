#pragma once

#include <array>
#include <span>
#include <vector>

namespace gsac {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Vec2, Vec2) = default;
};

double dot(Vec2 a, Vec2 b);
double cross(Vec2 a, Vec2 b);
double norm(Vec2 a);

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend bool operator==(Vec3, Vec3) = default;

    Vec2 xy() const { return {x, y}; }
};

/// Axis-aligned rectangle in the floor plane.
struct Rect2 {
    Vec2 min;
    Vec2 max;

    double area() const { return (max.x - min.x) * (max.y - min.y); }
    bool contains(Vec2 p) const { return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y; }
};

/// Axis-aligned box in room coordinates; z is up.
class BoundingBox3 {
public:
    BoundingBox3() = default;
    /// Throws DataError if min > max on any axis or a coordinate is not finite.
    BoundingBox3(Vec3 min, Vec3 max);

    static BoundingBox3 from_center(Vec3 center, Vec3 dims);

    const Vec3& min() const { return min_; }
    const Vec3& max() const { return max_; }

    double length() const { return max_.x - min_.x; }
    double width() const { return max_.y - min_.y; }
    double height() const { return max_.z - min_.z; }
    double volume() const { return length() * width() * height(); }
    Vec3 dims() const { return max_ - min_; }
    Vec3 centroid() const;
    double top() const { return max_.z; }
    double bottom() const { return min_.z; }
    Rect2 footprint() const { return {min_.xy(), max_.xy()}; }

    BoundingBox3 translated(Vec3 offset) const;

    friend bool operator==(const BoundingBox3&, const BoundingBox3&) = default;

private:
    Vec3 min_;
    Vec3 max_;
};

struct Segment2 {
    Vec2 a;
    Vec2 b;
};

double point_segment_distance(Vec2 p, const Segment2& s);
bool segments_intersect(const Segment2& s, const Segment2& t);
double segment_segment_distance(const Segment2& s, const Segment2& t);
double point_rect_distance(Vec2 p, const Rect2& r);
double rect_rect_distance(const Rect2& a, const Rect2& b);
/// Zero when the segment touches or crosses the closed rectangle.
double rect_segment_distance(const Rect2& r, const Segment2& s);
double point_box_distance(Vec3 p, const BoundingBox3& b);
double box_intersection_volume(const BoundingBox3& a, const BoundingBox3& b);

// Polygons are closed loops given by their vertices in order (last connects to first).
double polygon_signed_area(std::span<const Vec2> poly);
Vec2 polygon_centroid(std::span<const Vec2> poly);
/// Even-odd rule; points exactly on the boundary may land on either side.
bool point_in_polygon(Vec2 p, std::span<const Vec2> poly);
bool polygon_is_simple(std::span<const Vec2> poly);
Rect2 polygon_bounds(std::span<const Vec2> poly);

}  // namespace gsac
