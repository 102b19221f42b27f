#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "gsac/features.hpp"
#include "gsac/graphs.hpp"
#include "gsac/nn/layers.hpp"
#include "gsac/nn/serialize.hpp"

namespace gsac {

/// Layer widths of one group model. Defaults follow the published architecture; `reduced()` is a
/// desk-scale variant used for quick experiments.
struct ModelDims {
    std::vector<std::size_t> init_hidden{64, 64, 100};
    std::size_t gat_in = 100;
    std::size_t gat_heads = 10;
    std::size_t gat_head_dim = 10;
    double gat_dropout = 0.8;
    double gat_negative_slope = 0.2;
    std::vector<std::size_t> proj_hidden{512, 256, 128};
    std::size_t proj_out = 100;
    /// Encoder widths after the input; the decoder mirrors them back to proj_out.
    std::vector<std::size_t> ae_hidden{64, 32, 16};

    static ModelDims reduced();

    std::vector<std::size_t> init_widths() const;
    std::vector<std::size_t> proj_widths() const;
    std::vector<std::size_t> ae_widths() const;
    std::size_t gat_out() const { return gat_heads * gat_head_dim; }
    void validate() const;
};

/// Graphs and raw summary vector of one candidate placement.
struct PlacementFeatures {
    SceneGraphSet graphs;
    SummaryVector summary{};
};

/// Hypothetical object of `group` with footprint centered at `center`. Its bottom rests on the highest top
/// of any footprint-overlapping object whose top is at most support_height + tau, else on the floor (z = 0).
SceneObject make_candidate(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center, double support_height,
                           double tau);

inline constexpr std::string_view kCandidateId = "__candidate__";

/// Throws DataError when the candidate's footprint center lies outside the floor polygon.
PlacementFeatures extract_placement_features(const SceneObject& candidate, const Scene& scene, const FeatureParams& p);

/// All learned state for one furniture group.
class GroupModel {
public:
    GroupModel(FurnitureGroup group, ModelDims dims, FeatureParams features, std::uint64_t seed);
    // Parameters are shared handles; copies would alias them.
    GroupModel(const GroupModel&) = delete;
    GroupModel& operator=(const GroupModel&) = delete;
    GroupModel(GroupModel&&) = default;
    GroupModel& operator=(GroupModel&&) = default;

    FurnitureGroup group() const { return group_; }
    const ModelDims& dims() const { return dims_; }
    const FeatureParams& feature_params() const { return features_; }
    const Standardizer& standardizer() const { return standardizer_; }
    void set_standardizer(Standardizer s) { standardizer_ = std::move(s); }
    /// Highest bottom elevation among training placements that rest on furniture; 0 = floor only.
    double support_height() const { return support_height_; }
    void set_support_height(double h) { support_height_ = h; }

    const nn::Mlp& init_net() const { return init_; }
    const std::array<nn::GatLayer, kRelationCount>& gat() const { return gat_; }
    const nn::Mlp& proj_net() const { return proj_; }
    const nn::Mlp& autoencoder() const { return ae_; }

    std::vector<nn::Var> igatp_parameters() const;
    std::vector<nn::Var> ae_parameters() const;

    /// Projection of one placement (1 x proj_out). `dropout_rng` enables training-mode attention dropout.
    nn::Var igatp_forward(const PlacementFeatures& f, Rng* dropout_rng = nullptr) const;
    /// Same, but also returns each relation's target message (1 x gat_out each).
    nn::Var igatp_forward(const PlacementFeatures& f, Rng* dropout_rng, std::array<nn::Var, kRelationCount>* messages) const;
    nn::Var reconstruct(const nn::Var& projected) const;

    /// exp(-MSE(y, AE(y))).
    double plausibility(const nn::Tensor& projected) const;
    double reconstruction_error(const nn::Tensor& projected) const;
    /// Eval-mode score of a candidate placement in a scene.
    double score(const SceneObject& candidate, const Scene& scene) const;
    nn::Tensor project(const SceneObject& candidate, const Scene& scene) const;

    nn::NamedTensors named_tensors() const;
    void load_tensors(const nn::NamedTensors& tensors);

private:
    FurnitureGroup group_;
    ModelDims dims_;
    FeatureParams features_;
    nn::Mlp init_;
    std::array<nn::GatLayer, kRelationCount> gat_;
    nn::Mlp proj_;
    nn::Mlp ae_;
    Standardizer standardizer_;
    double support_height_ = 0.0;
};

/// Free-form provenance written next to a saved model.
struct BundleManifest {
    std::uint64_t seed = 0;
    std::string dataset_fingerprint;
    /// Serialized training configuration (JSON text), stored verbatim.
    std::string train_config_json = "{}";
};

inline constexpr int kBundleFormatVersion = 1;

/// <dir>/<Group>/{params.bin, manifest.json}.
std::filesystem::path bundle_path(const std::filesystem::path& model_dir, FurnitureGroup g);
void save_bundle(const GroupModel& model, const std::filesystem::path& model_dir, const BundleManifest& manifest);
GroupModel load_bundle(const std::filesystem::path& model_dir, FurnitureGroup g);

}  // namespace gsac
