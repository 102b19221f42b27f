#include "gsac/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gsac/error.hpp"

namespace gsac {

double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a) { return std::hypot(a.x, a.y); }

BoundingBox3::BoundingBox3(Vec3 min, Vec3 max) : min_(min), max_(max) {
    const std::array<double, 6> coords{min.x, min.y, min.z, max.x, max.y, max.z};
    for (double c : coords) {
        if (!std::isfinite(c)) throw DataError("bounding box has a non-finite coordinate");
    }
    if (min.x > max.x || min.y > max.y || min.z > max.z) {
        throw DataError("bounding box min exceeds max");
    }
}

BoundingBox3 BoundingBox3::from_center(Vec3 center, Vec3 dims) {
    const Vec3 half{dims.x / 2, dims.y / 2, dims.z / 2};
    return BoundingBox3(center - half, center + half);
}

Vec3 BoundingBox3::centroid() const {
    return {(min_.x + max_.x) / 2, (min_.y + max_.y) / 2, (min_.z + max_.z) / 2};
}

BoundingBox3 BoundingBox3::translated(Vec3 offset) const {
    return BoundingBox3(min_ + offset, max_ + offset);
}

double point_segment_distance(Vec2 p, const Segment2& s) {
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return norm(p - (s.a + t * d));
}

namespace {

int orientation(Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
}

bool on_segment(Vec2 p, const Segment2& s) {
    return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
           std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

double axis_gap(double amin, double amax, double bmin, double bmax) {
    return std::max({0.0, bmin - amax, amin - bmax});
}

}  // namespace

bool segments_intersect(const Segment2& s, const Segment2& t) {
    const int o1 = orientation(s.a, s.b, t.a);
    const int o2 = orientation(s.a, s.b, t.b);
    const int o3 = orientation(t.a, t.b, s.a);
    const int o4 = orientation(t.a, t.b, s.b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(t.a, s)) return true;
    if (o2 == 0 && on_segment(t.b, s)) return true;
    if (o3 == 0 && on_segment(s.a, t)) return true;
    if (o4 == 0 && on_segment(s.b, t)) return true;
    return false;
}

double segment_segment_distance(const Segment2& s, const Segment2& t) {
    if (segments_intersect(s, t)) return 0.0;
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                     point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

double point_rect_distance(Vec2 p, const Rect2& r) {
    const double dx = std::max({0.0, r.min.x - p.x, p.x - r.max.x});
    const double dy = std::max({0.0, r.min.y - p.y, p.y - r.max.y});
    return std::hypot(dx, dy);
}

double rect_rect_distance(const Rect2& a, const Rect2& b) {
    return std::hypot(axis_gap(a.min.x, a.max.x, b.min.x, b.max.x),
                      axis_gap(a.min.y, a.max.y, b.min.y, b.max.y));
}

double rect_segment_distance(const Rect2& r, const Segment2& s) {
    if (r.contains(s.a) || r.contains(s.b)) return 0.0;
    const std::array<Vec2, 4> c{r.min, Vec2{r.max.x, r.min.y}, r.max, Vec2{r.min.x, r.max.y}};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < 4; ++i) {
        best = std::min(best, segment_segment_distance(Segment2{c[i], c[(i + 1) % 4]}, s));
        if (best == 0.0) break;
    }
    return best;
}

double point_box_distance(Vec3 p, const BoundingBox3& b) {
    const double dx = std::max({0.0, b.min().x - p.x, p.x - b.max().x});
    const double dy = std::max({0.0, b.min().y - p.y, p.y - b.max().y});
    const double dz = std::max({0.0, b.min().z - p.z, p.z - b.max().z});
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double box_intersection_volume(const BoundingBox3& a, const BoundingBox3& b) {
    const double dx = std::min(a.max().x, b.max().x) - std::max(a.min().x, b.min().x);
    const double dy = std::min(a.max().y, b.max().y) - std::max(a.min().y, b.min().y);
    const double dz = std::min(a.max().z, b.max().z) - std::max(a.min().z, b.min().z);
    if (dx <= 0 || dy <= 0 || dz <= 0) return 0.0;
    return dx * dy * dz;
}

double polygon_signed_area(std::span<const Vec2> poly) {
    double acc = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        acc += cross(poly[i], poly[(i + 1) % poly.size()]);
    }
    return acc / 2;
}

Vec2 polygon_centroid(std::span<const Vec2> poly) {
    const double area = polygon_signed_area(poly);
    if (area == 0.0) throw DataError("centroid of a zero-area polygon");
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2 p = poly[i];
        const Vec2 q = poly[(i + 1) % poly.size()];
        const double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6 * area), cy / (6 * area)};
}

bool point_in_polygon(Vec2 p, std::span<const Vec2> poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

bool polygon_is_simple(std::span<const Vec2> poly) {
    const std::size_t n = poly.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        if (poly[i] == poly[(i + 1) % n]) return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Segment2 s{poly[i], poly[(i + 1) % n]};
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const Segment2 t{poly[j], poly[(j + 1) % n]};
            if (adjacent) {
                // Neighbours share one vertex; they may only overlap if collinear and folding back.
                const Vec2 shared = (j == i + 1) ? s.b : s.a;
                const Vec2 other_s = (j == i + 1) ? s.a : s.b;
                const Vec2 other_t = (j == i + 1) ? t.b : t.a;
                if (cross(other_s - shared, other_t - shared) == 0.0 &&
                    dot(other_s - shared, other_t - shared) > 0.0) {
                    return false;
                }
                continue;
            }
            if (segments_intersect(s, t)) return false;
        }
    }
    return true;
}

Rect2 polygon_bounds(std::span<const Vec2> poly) {
    Rect2 r{poly.front(), poly.front()};
    for (const Vec2& p : poly) {
        r.min.x = std::min(r.min.x, p.x);
        r.min.y = std::min(r.min.y, p.y);
        r.max.x = std::max(r.max.x, p.x);
        r.max.y = std::max(r.max.y, p.y);
    }
    return r;
}

}  // namespace gsac
