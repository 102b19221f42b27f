#pragma once

#include <cstdint>
#include <vector>

#include "gsac/scene.hpp"

namespace gsac {

/// Rule-based rectangular bedrooms: the Bed always fills a corner with a Storage nightstand beside it,
/// a Table always has 2-4 Chairs touching it, and optional Decor on the table, a Sofa along a wall and
/// a Picture hanging on a wall.
struct SyntheticParams {
    int rooms = 120;
    double min_length = 3.6;
    double max_length = 5.5;
    double min_width = 3.6;
    double max_width = 4.6;
    std::uint64_t seed = 0;
};

std::vector<Scene> generate_rule_corpus(const SyntheticParams& p);

}  // namespace gsac
