#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "gsac/model.hpp"

namespace gsac {

/// Sampling grid over the room's bounding rectangle: metric cells, or a fixed count per side when
/// samples_per_side > 0.
struct GridOptions {
    double cell_size = 0.1;
    int samples_per_side = 0;

    void validate() const;
};

struct PlacementMap {
    Vec2 origin;  // lower-left corner of cell (0, 0)
    double cell_w = 0.0;
    double cell_h = 0.0;
    int nx = 0;
    int ny = 0;
    /// Row-major (row = y index); entries where mask is 0 are undefined and left at 0.
    std::vector<double> probs;
    std::vector<std::uint8_t> mask;

    Vec2 cell_center(int ix, int iy) const {
        return {origin.x + (ix + 0.5) * cell_w, origin.y + (iy + 0.5) * cell_h};
    }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx + ix; }
    std::size_t masked_cells() const;
};

/// Grid geometry and floor mask, with probabilities unset.
PlacementMap make_grid(const Scene& scene, const GridOptions& grid);

/// Anything that rates a candidate center for an object of the given extents in a scene.
class PlacementScorer {
public:
    virtual ~PlacementScorer() = default;
    virtual double score(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center) const = 0;
};

/// Plausibility under a trained group model; the candidate rests on the floor or a supporting surface.
class ModelScorer final : public PlacementScorer {
public:
    explicit ModelScorer(std::shared_ptr<const GroupModel> model) : model_(std::move(model)) {}
    double score(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center) const override;
    const GroupModel& model() const { return *model_; }

private:
    std::shared_ptr<const GroupModel> model_;
};

/// Independent Uniform(0, 1] score per cell, a deterministic function of the seed, scene id and center.
class UniformRandomScorer final : public PlacementScorer {
public:
    explicit UniformRandomScorer(std::uint64_t seed) : seed_(seed) {}
    double score(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center) const override;

private:
    std::uint64_t seed_;
};

/// Scores every in-mask cell center (in parallel).
PlacementMap probability_map(const PlacementScorer& scorer, const Scene& scene, FurnitureGroup group, Vec3 dims,
                             const GridOptions& grid = {});
PlacementMap probability_map(const GroupModel& model, const Scene& scene, Vec3 dims, const GridOptions& grid = {});

struct Proposal {
    Vec2 position;
    double probability = 0.0;
};

/// Greedy non-maximum suppression: highest probability first (row-major on ties), skipping cells within
/// nms_radius of an already chosen point. Throws DataError for k < 1 or an empty mask.
std::vector<Proposal> top_k(const PlacementMap& map, int k, double nms_radius);

/// Half the footprint diagonal.
double default_nms_radius(Vec3 dims);

void write_heatmap_csv(const PlacementMap& map, const std::filesystem::path& path);
/// Binary 16-bit PGM, one pixel per cell, top row = highest y; masked cells are 0.
void write_heatmap_pgm(const PlacementMap& map, const std::filesystem::path& path);

struct FoldResult {
    int fold = 0;
    double top1 = 0.0;
    double top5 = 0.0;
    int count = 0;
};

struct GroupResult {
    FurnitureGroup group = FurnitureGroup::Bed;
    double top1 = 0.0;
    double top5 = 0.0;
    int count = 0;
    std::vector<FoldResult> folds;
};

struct EvalReport {
    std::vector<GroupResult> groups;
    std::vector<std::string> warnings;

    const GroupResult* find(FurnitureGroup g) const;
    /// Object-weighted means over all groups.
    double overall_top1() const;
    double overall_top5() const;
};

struct EvalOptions {
    int folds = 4;
    /// Fraction of rooms used for training in each fold.
    double train_split = 0.8;
    GridOptions grid;
    int k = 5;
    /// <= 0 selects default_nms_radius of the removed object.
    double nms_radius = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Returns the scorer to evaluate for one group after training on `train_rooms`.
using FoldTrainer =
    std::function<std::shared_ptr<const PlacementScorer>(std::span<const Scene> train_rooms, FurnitureGroup g, int fold)>;

/// Room index sets (train, validation) of each fold; validation chunks are disjoint.
std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> fold_partition(std::size_t rooms,
                                                                                         const EvalOptions& opt);

/// Object-removal experiment with k-fold cross validation. Throws DataError when there are fewer rooms
/// than folds; groups absent from some validation fold or with too few rooms are skipped with a warning.
EvalReport removal_experiment(std::span<const Scene> rooms, std::span<const FurnitureGroup> groups,
                              const FoldTrainer& train, const EvalOptions& opt);

void write_report_text(std::ostream& os, const EvalReport& r);
std::string report_json(const EvalReport& r);

}  // namespace gsac
