#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "gsac/random.hpp"
#include "gsac/scene.hpp"

namespace gsac {

struct AugmentParams {
    int variants_per_room = 20;
    double wall_offset_max = 0.5;
    double falloff_lambda = 1.0;
    double open_space_max = 0.95;
    double overlap_max = 0.40;
    int removal_n = 4;
    bool removal = true;
    int max_attempts = 1000;
    int open_space_resolution = 512;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One signed offset per wall along its outward normal, Uniform(-max, +max).
std::vector<double> draw_wall_offsets(const Scene& s, const AugmentParams& p, Rng& rng);

/// Translates every wall along its outward normal by `offsets` and moves each object in (x, y) by its
/// closest wall's offset vector scaled by exp(-d / falloff_lambda). Returns nullopt when the deformed
/// wall loop is degenerate.
std::optional<Scene> deform_room(const Scene& s, std::span<const double> offsets, double falloff_lambda);

/// Draw + deform, retrying rejected draws up to p.max_attempts times.
Scene augment_room(const Scene& s, const AugmentParams& p, Rng& rng);

bool check_open_space(const Scene& s, const AugmentParams& p);
bool check_overlaps(const Scene& s, const AugmentParams& p);
/// Repeatedly drops the smaller member of any pair whose overlap exceeds overlap_max of the smaller volume.
Scene filter_overlaps(const Scene& s, const AugmentParams& p);

/// Scenes with the 1..n smallest-volume objects removed, stopping before a room would become empty.
std::vector<Scene> iterative_removal(const Scene& s, const AugmentParams& p);

struct StageCounts {
    std::string name;
    std::size_t rooms = 0;
    std::array<std::size_t, kGroupCount> objects{};
};

StageCounts count_stage(std::string name, std::span<const Scene> scenes);

struct AugmentResult {
    std::vector<Scene> original;
    std::vector<Scene> parametric;
    std::vector<Scene> filtered;
    /// Filtered rooms followed by their removal-derived rooms that still pass the open-space check
    /// (empty when removal is off).
    std::vector<Scene> removal;
    std::array<StageCounts, 4> report;

    const std::vector<Scene>& final_corpus() const { return removal.empty() ? filtered : removal; }
};

AugmentResult build_augmented_dataset(std::span<const Scene> scenes, const AugmentParams& p);

/// Plain-text table: one row per group plus a Rooms row, one column per stage.
void write_stage_report(std::ostream& os, const std::array<StageCounts, 4>& report);

}  // namespace gsac
