#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gsac/augment.hpp"
#include "gsac/features.hpp"
#include "gsac/model.hpp"
#include "gsac/placement.hpp"
#include "gsac/training.hpp"

namespace gsac {

inline constexpr int kSceneSchemaVersion = 1;

/// Parses a scene document. Schema violations throw DataError prefixed with the offending field path
/// (for example "objects[2].max.z").
Scene scene_from_json(std::string_view text, const std::string& source = "<scene>");
std::string scene_to_json(const Scene& s);

Scene load_scene(const std::filesystem::path& path);
void save_scene(const Scene& s, const std::filesystem::path& path);

/// Scene files (*.json) directly inside `dir`, sorted by name; a single file path is accepted as well.
std::vector<std::filesystem::path> list_scene_files(const std::filesystem::path& dir_or_file);
std::vector<Scene> load_corpus(const std::filesystem::path& dir_or_file);
/// Writes <dir>/<scene id>.json for every scene.
void save_corpus(std::span<const Scene> scenes, const std::filesystem::path& dir);

struct RunConfig {
    FeatureParams features;
    AugmentParams augment;
    TrainConfig train;
    ModelDims model;
    GridOptions grid;
    EvalOptions eval;
    std::uint64_t seed = 0;
    /// Propagates `seed` into the sub-configurations.
    void apply_seed(std::uint64_t s);
};

/// Every field is optional; unknown keys throw DataError naming their path.
RunConfig config_from_json(std::string_view text);
std::string config_to_json(const RunConfig& c);

inline constexpr const char* kConfigEnvVar = "GSAC_CONFIG";

/// Loads `explicit_path` if given, else the file named by $GSAC_CONFIG, else defaults.
RunConfig load_run_config(const std::optional<std::filesystem::path>& explicit_path);

}  // namespace gsac
