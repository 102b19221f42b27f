#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gsac/model.hpp"

namespace gsac {

struct TrainConfig {
    int epochs = 100;
    int batch_pairs = 100;
    double lr = 0.005;
    double l2_siamese = 1.0;
    double l2_ae = 0.0;
    double margin = 15.0;
    int negatives_per_positive = 1;
    int ae_batch = 100;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json() const;
};

/// A candidate placement of one object in a scene, with its plausibility label.
struct LabeledPlacement {
    /// Context scene; for positives the placed object itself has been removed.
    std::shared_ptr<const Scene> scene;
    FurnitureGroup group = FurnitureGroup::Bed;
    /// Box extents (x, y, z).
    Vec3 dims;
    Vec2 center;
    double bottom_z = 0.0;
    int label = 0;

    SceneObject object() const;
};

/// Draws a uniform floor point at least half the object diagonal away from every ground-truth placement of
/// the same group (including `extra_truths`), resting as make_candidate decides. Throws ComputeError
/// after `max_draws` rejections.
LabeledPlacement sample_negative(std::shared_ptr<const Scene> scene, FurnitureGroup group, Vec3 dims,
                                 std::span<const Vec2> extra_truths, double support_height, double tau, Rng& rng,
                                 int max_draws = 1000);

/// Highest bottom elevation of group members resting on another object (0 if all stand on the floor).
double fit_support_height(std::span<const Scene> scenes, FurnitureGroup group, const FeatureParams& p);

struct GroupDataset {
    std::vector<LabeledPlacement> placements;
    std::vector<PlacementFeatures> features;
    double support_height = 0.0;

    std::size_t positives() const;
    std::size_t negatives() const;
};

/// One positive per group member (context = its room without it) plus negatives_per_positive sampled
/// negatives in the same context. Features are extracted in parallel.
GroupDataset build_group_dataset(std::span<const Scene> scenes, FurnitureGroup group, const FeatureParams& p,
                                 int negatives_per_positive, std::uint64_t seed);

/// Fits the summary standardizer on the dataset and sets the support height.
void fit_statistics(GroupModel& model, const GroupDataset& data);

/// Siamese contrastive training of INIT/GAT/PROJ. Returns the mean pair loss per epoch.
std::vector<double> train_siamese(GroupModel& model, const GroupDataset& data, const TrainConfig& cfg);

/// Eval-mode projections of the positive placements.
std::vector<nn::Tensor> project_positives(const GroupModel& model, const GroupDataset& data);

/// Autoencoder training on fixed projections; INIT/GAT/PROJ are untouched. Returns the mean MSE per epoch.
std::vector<double> train_autoencoder(GroupModel& model, std::span<const nn::Tensor> projections,
                                      const TrainConfig& cfg);

struct TrainResult {
    GroupModel model;
    std::vector<double> siamese_loss;
    std::vector<double> ae_loss;
};

/// Full two-stage pipeline for one group.
TrainResult train_group(std::span<const Scene> scenes, FurnitureGroup group, const ModelDims& dims,
                        const FeatureParams& features, const TrainConfig& cfg);

/// Stable digest of a scene corpus, recorded in model manifests.
std::string dataset_fingerprint(std::span<const Scene> scenes);

}  // namespace gsac
