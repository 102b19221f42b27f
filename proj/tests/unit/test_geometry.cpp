#include <doctest.h>

#include <cmath>
#include <limits>

#include "gsac/error.hpp"
#include "gsac/scene.hpp"
#include "../support/oracles.hpp"

using namespace gsac;

namespace {

BoundingBox3 box(double x0, double y0, double z0, double x1, double y1, double z1) {
    return BoundingBox3({x0, y0, z0}, {x1, y1, z1});
}

/// Minimum pairwise distance between dense samples of two box surfaces.
double surface_sampling_distance(const BoundingBox3& a, const BoundingBox3& b, int per_side) {
    auto sample = [per_side](const BoundingBox3& bb) {
        std::vector<Vec3> pts;
        const Vec3 lo = bb.min();
        const Vec3 d = bb.dims();
        for (int face = 0; face < 6; ++face) {
            const int axis = face / 2;
            for (int i = 0; i <= per_side; ++i) {
                for (int j = 0; j <= per_side; ++j) {
                    const double u = static_cast<double>(i) / per_side;
                    const double v = static_cast<double>(j) / per_side;
                    double c[3];
                    c[axis] = face % 2 ? 1.0 : 0.0;
                    c[(axis + 1) % 3] = u;
                    c[(axis + 2) % 3] = v;
                    pts.push_back({lo.x + c[0] * d.x, lo.y + c[1] * d.y, lo.z + c[2] * d.z});
                }
            }
        }
        return pts;
    };
    const auto pa = sample(a);
    const auto pb = sample(b);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pa) {
        for (const auto& q : pb) best = std::min(best, std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) + (p.z - q.z) * (p.z - q.z)));
    }
    return best;
}

}  // namespace

TEST_CASE("bounding box validation and derived quantities") {
    CHECK_THROWS_AS(box(1, 0, 0, 0, 1, 1), DataError);
    CHECK_THROWS_AS(box(0, 0, 0, 1, std::nan(""), 1), DataError);
    const auto b = box(0, 0, 0, 2, 1, 3);
    CHECK(b.length() == 2.0);
    CHECK(b.width() == 1.0);
    CHECK(b.height() == 3.0);
    CHECK(b.volume() == 6.0);
    CHECK(b.centroid() == Vec3{1.0, 0.5, 1.5});
    const auto c = BoundingBox3::from_center({1, 1, 1}, {2, 2, 2});
    CHECK(c.min() == Vec3{0, 0, 0});
}

TEST_CASE("bbox_distance examples") {
    const auto unit = box(0, 0, 0, 1, 1, 1);
    CHECK(bbox_distance(unit, unit) == 0.0);
    CHECK(bbox_distance(unit, box(2, 0, 0, 3, 1, 1)) == doctest::Approx(1.0));
    const auto diag = box(2, 2, 0, 3, 3, 1);
    CHECK(bbox_distance(unit, diag) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(surface_sampling_distance(unit, diag, 20) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("bbox_distance properties against the Minkowski oracle") {
    Rng rng(11);
    for (int t = 0; t < 2000; ++t) {
        auto rb = [&] {
            const double x = uniform(rng, -3, 3), y = uniform(rng, -3, 3), z = uniform(rng, -3, 3);
            return box(x, y, z, x + uniform(rng, 0, 2), y + uniform(rng, 0, 2), z + uniform(rng, 0, 2));
        };
        const auto a = rb();
        const auto b = rb();
        const double d = bbox_distance(a, b);
        CHECK(d == doctest::Approx(oracle::box_distance(a, b)).epsilon(1e-12));
        CHECK(d == bbox_distance(b, a));
        CHECK(d >= 0.0);
        const Vec3 shift{uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5)};
        CHECK(bbox_distance(a.translated(shift), b.translated(shift)) == doctest::Approx(d).epsilon(1e-12));
    }
    // Surface sampling on a handful of random pairs.
    for (int t = 0; t < 5; ++t) {
        const auto a = box(0, 0, 0, 1, 0.5, 0.7);
        const auto b = box(uniform(rng, 1.2, 2), uniform(rng, -1, 1), uniform(rng, -1, 1), 2.5, 1.5, 1.2);
        CHECK(bbox_distance(a, b) == doctest::Approx(surface_sampling_distance(a, b, 40)).epsilon(2e-3));
    }
}

TEST_CASE("bbox_wall_distance examples") {
    const Wall w{"w", {{0, 0}, {0, 1}}};
    CHECK(bbox_wall_distance(box(0, 0, 0, 1, 1, 1), w) == 0.0);
    CHECK(bbox_wall_distance(box(1, 0, 0, 2, 1, 1), w) == doctest::Approx(1.0));
    CHECK(bbox_wall_distance(box(1, 2, 0, 2, 3, 1), w) == doctest::Approx(std::sqrt(2.0)));
    Rng rng(5);
    for (int t = 0; t < 500; ++t) {
        const Wall r{"r", {{uniform(rng, -3, 3), uniform(rng, -3, 3)}, {uniform(rng, -3, 3), uniform(rng, -3, 3)}}};
        const double x = uniform(rng, -2, 2), y = uniform(rng, -2, 2);
        const auto b = box(x, y, 0, x + uniform(rng, 0.1, 2), y + uniform(rng, 0.1, 2), 1);
        CHECK(bbox_wall_distance(b, r) == doctest::Approx(oracle::footprint_segment_distance(b, r.segment)).epsilon(1e-6));
    }
}

TEST_CASE("bbox_xy_intersects examples") {
    const auto unit = box(0, 0, 0, 1, 1, 1);
    CHECK(bbox_xy_intersects(unit, box(0.5, 0, 5, 1.5, 1, 6)));
    CHECK_FALSE(bbox_xy_intersects(unit, box(2, 2, 2, 3, 3, 3)));
    CHECK(bbox_xy_intersects(unit, box(1, 0, 0, 2, 1, 1)));
}

TEST_CASE("scene validation") {
    CHECK_NOTHROW(make_rect_room("r", "bedroom", 4, 3));
    // Two walls only.
    CHECK_THROWS_AS(Scene("r", "", {{"a", {{0, 0}, {1, 0}}}, {"b", {{1, 0}, {0, 0}}}}, {}), DataError);
    // Open loop.
    CHECK_THROWS_AS(Scene("r", "", {{"a", {{0, 0}, {1, 0}}}, {"b", {{1, 0}, {1, 1}}}, {"c", {{1, 1}, {0, 0.5}}}}, {}),
                    DataError);
    // Bow-tie polygon self-intersects.
    CHECK_THROWS_AS(Scene("r", "",
                          {{"a", {{0, 0}, {1, 1}}}, {"b", {{1, 1}, {1, 0}}}, {"c", {{1, 0}, {0, 1}}}, {"d", {{0, 1}, {0, 0}}}},
                          {}),
                    DataError);
    const Scene s = make_rect_room("r", "bedroom", 4, 2);
    CHECK(s.floor_area() == doctest::Approx(8.0));
    CHECK(s.center() == Vec2{2.0, 1.0});
    CHECK(s.contains_xy({1, 1}));
    CHECK_FALSE(s.contains_xy({5, 1}));
}

TEST_CASE("open_space_ratio") {
    CHECK(open_space_ratio(make_rect_room("e", "", 10, 10)) == doctest::Approx(1.0));
    const Scene one = make_rect_room("o", "", 10, 10, {{"a", FurnitureGroup::Bed, box(1, 1, 0, 6, 6, 1)}});
    CHECK(open_space_ratio(one) == doctest::Approx(0.75).epsilon(1e-3));

    // Two overlapping footprints in an L-shaped room against a fine raster oracle.
    const std::vector<Vec2> poly{{0, 0}, {6, 0}, {6, 3}, {3, 3}, {3, 6}, {0, 6}};
    std::vector<Wall> walls;
    for (std::size_t i = 0; i < poly.size(); ++i) walls.push_back({"w" + std::to_string(i), {poly[i], poly[(i + 1) % poly.size()]}});
    const Scene l("l", "", walls,
                  {{"a", FurnitureGroup::Bed, box(0.5, 0.5, 0, 2.5, 2.0, 1)},
                   {"b", FurnitureGroup::Table, box(1.5, 1.0, 0, 4.2, 3.7, 1)}});
    const int n = 1000;
    int floor_cells = 0;
    int free_cells = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = (i + 0.5) * 6.0 / n;
            const double y = (j + 0.5) * 6.0 / n;
            const bool in_floor = !(x > 3 && y > 3);
            if (!in_floor) continue;
            ++floor_cells;
            const bool occ = (x >= 0.5 && x <= 2.5 && y >= 0.5 && y <= 2.0) || (x >= 1.5 && x <= 4.2 && y >= 1.0 && y <= 3.7);
            if (!occ) ++free_cells;
        }
    }
    CHECK(open_space_ratio(l) == doctest::Approx(static_cast<double>(free_cells) / floor_cells).epsilon(0.01));

    // Adding objects never increases the open space.
    Rng rng(3);
    Scene grow = make_rect_room("g", "", 5, 5);
    double prev = open_space_ratio(grow);
    std::vector<SceneObject> objs;
    for (int k = 0; k < 6; ++k) {
        const double x = uniform(rng, 0, 4), y = uniform(rng, 0, 4);
        objs.push_back({"o" + std::to_string(k), FurnitureGroup::Chair, box(x, y, 0, x + 1, y + 1, 1)});
        const double next = open_space_ratio(grow.with_objects(objs));
        CHECK(next <= prev);
        prev = next;
    }
}

TEST_CASE("furniture group labels round-trip") {
    CHECK(kAllGroups.size() == 8);
    for (FurnitureGroup g : kAllGroups) {
        CHECK(parse_group(group_name(g)) == g);
        CHECK(group_from_index(group_index(g)) == g);
    }
    CHECK_FALSE(parse_group("Lamp").has_value());
}
