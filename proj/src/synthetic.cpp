#include "gsac/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <optional>
#include <string>

#include "gsac/error.hpp"
#include "gsac/random.hpp"

namespace gsac {

namespace {

struct Layout {
    std::vector<SceneObject> objects;

    bool fits(const BoundingBox3& b, double clearance) const {
        const Rect2 r = b.footprint();
        for (const auto& o : objects) {
            if (o.bbox.bottom() > 1.0 || b.bottom() > 1.0) continue;  // wall-hung items do not block the floor
            if (rect_rect_distance(r, o.bbox.footprint()) < clearance) return false;
        }
        return true;
    }
    void add(std::string id, FurnitureGroup g, const BoundingBox3& b) { objects.push_back({std::move(id), g, b}); }
};

BoundingBox3 box(double x0, double y0, double z0, double dx, double dy, double dz) {
    return BoundingBox3({x0, y0, z0}, {x0 + dx, y0 + dy, z0 + dz});
}

std::optional<Scene> try_room(int index, double L, double W, Rng& rng) {
    Layout lay;
    const std::string prefix = "o";
    int next = 0;
    auto id = [&] { return prefix + std::to_string(next++); };

    // Bed flush into a corner, long side along x or y.
    const bool along_x = std::bernoulli_distribution(0.5)(rng);
    const double bx = along_x ? 2.0 : 1.5;
    const double by = along_x ? 1.5 : 2.0;
    const int corner = std::uniform_int_distribution<int>(0, 3)(rng);
    const bool right = corner == 1 || corner == 2;
    const bool top = corner >= 2;
    const double x0 = right ? L - bx : 0.0;
    const double y0 = top ? W - by : 0.0;
    lay.add(id(), FurnitureGroup::Bed, box(x0, y0, 0.0, bx, by, 0.5));

    // Nightstand at the head of the bed: against the wall the headboard touches, on the open long side.
    const double ns = 0.5;
    if (along_x) {
        const double ny = top ? y0 - ns : y0 + by;
        lay.add(id(), FurnitureGroup::Storage, box(right ? L - ns : 0.0, ny, 0.0, ns, ns, 0.6));
    } else {
        const double nx = right ? x0 - ns : x0 + bx;
        lay.add(id(), FurnitureGroup::Storage, box(nx, top ? W - ns : 0.0, 0.0, ns, ns, 0.6));
    }

    // Table with touching chairs, placed as one unit anywhere it fits.
    const double tx = 1.2;
    const double ty = 0.8;
    const double c = 0.45;
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
        const double px = uniform(rng, c, L - c - tx);
        const double py = uniform(rng, c, W - c - ty);
        const BoundingBox3 unit = box(px - c, py - c, 0.0, tx + 2 * c, ty + 2 * c, 0.9);
        if (!lay.fits(unit, 0.1)) continue;
        const BoundingBox3 table = box(px, py, 0.0, tx, ty, 0.75);
        lay.add(id(), FurnitureGroup::Table, table);
        const std::array<BoundingBox3, 4> chairs{
            box(px - c, py + (ty - c) / 2, 0.0, c, c, 0.9), box(px + tx, py + (ty - c) / 2, 0.0, c, c, 0.9),
            box(px + (tx - c) / 2, py - c, 0.0, c, c, 0.9), box(px + (tx - c) / 2, py + ty, 0.0, c, c, 0.9)};
        const int n_chairs = std::uniform_int_distribution<int>(2, 4)(rng);
        std::array<int, 4> order{0, 1, 2, 3};
        std::shuffle(order.begin(), order.end(), rng);
        for (int k = 0; k < n_chairs; ++k) lay.add(id(), FurnitureGroup::Chair, chairs[static_cast<std::size_t>(order[k])]);
        if (std::bernoulli_distribution(0.5)(rng)) {
            const double d = 0.3;
            lay.add(id(), FurnitureGroup::Decor,
                    box(px + uniform(rng, 0.0, tx - d), py + uniform(rng, 0.0, ty - d), 0.75, d, d, 0.3));
        }
        placed = true;
    }
    if (!placed) return std::nullopt;

    // Optional sofa against a wall.
    if (std::bernoulli_distribution(0.5)(rng)) {
        for (int attempt = 0; attempt < 50; ++attempt) {
            const int wall = std::uniform_int_distribution<int>(0, 3)(rng);
            const double sl = 1.8;
            const double sd = 0.9;
            BoundingBox3 b;
            if (wall == 0 || wall == 2) {
                if (L < sl) break;
                b = box(uniform(rng, 0.0, L - sl), wall == 0 ? 0.0 : W - sd, 0.0, sl, sd, 0.8);
            } else {
                if (W < sl) break;
                b = box(wall == 1 ? L - sd : 0.0, uniform(rng, 0.0, W - sl), 0.0, sd, sl, 0.8);
            }
            if (lay.fits(b, 0.3)) {
                lay.add(id(), FurnitureGroup::Sofa, b);
                break;
            }
        }
    }

    // Optional picture on a wall.
    if (std::bernoulli_distribution(0.4)(rng)) {
        const int wall = std::uniform_int_distribution<int>(0, 3)(rng);
        const double pw = 0.8;
        const double pd = 0.05;
        if (wall == 0 || wall == 2) {
            lay.add(id(), FurnitureGroup::Picture, box(uniform(rng, 0.0, L - pw), wall == 0 ? 0.0 : W - pd, 1.4, pw, pd, 0.6));
        } else {
            lay.add(id(), FurnitureGroup::Picture, box(wall == 1 ? L - pd : 0.0, uniform(rng, 0.0, W - pw), 1.4, pd, pw, 0.6));
        }
    }

    char name[32];
    std::snprintf(name, sizeof name, "synth_%04d", index);
    return make_rect_room(name, "bedroom", L, W, std::move(lay.objects));
}

}  // namespace

std::vector<Scene> generate_rule_corpus(const SyntheticParams& p) {
    if (p.rooms < 0) throw DataError("synthetic room count must be nonnegative");
    if (!(p.min_length > 3.0 && p.min_length <= p.max_length && p.min_width > 3.0 && p.min_width <= p.max_width)) {
        throw DataError("synthetic room extents must exceed 3 m and satisfy min <= max");
    }
    std::vector<Scene> out;
    out.reserve(static_cast<std::size_t>(p.rooms));
    for (int i = 0; i < p.rooms; ++i) {
        Rng rng = derive_rng(p.seed, "synthetic/" + std::to_string(i));
        for (int attempt = 0;; ++attempt) {
            const double L = uniform(rng, p.min_length, p.max_length);
            const double W = uniform(rng, p.min_width, p.max_width);
            if (auto s = try_room(i, L, W, rng)) {
                out.push_back(std::move(*s));
                break;
            }
            if (attempt > 100) throw ComputeError("could not lay out synthetic room " + std::to_string(i));
        }
    }
    return out;
}

}  // namespace gsac
