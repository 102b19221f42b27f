#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gsac/augment.hpp"
#include "gsac/error.hpp"
#include "gsac/io.hpp"
#include "gsac/nn/serialize.hpp"
#include "gsac/placement.hpp"
#include "gsac/synthetic.hpp"
#include "gsac/training.hpp"

namespace fs = std::filesystem;
using namespace gsac;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kRuntime = 3 };

struct Globals {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::string groups;
    std::optional<double> grid_cell;
    std::string out;
};

RunConfig resolve_config(const Globals& g) {
    RunConfig c = load_run_config(g.config ? std::optional<fs::path>(*g.config) : std::nullopt);
    if (g.seed) c.apply_seed(*g.seed);
    if (g.grid_cell) {
        c.grid.cell_size = *g.grid_cell;
        c.grid.samples_per_side = 0;
        c.grid.validate();
    }
    c.eval.grid = c.grid;
    return c;
}

std::vector<FurnitureGroup> resolve_groups(const std::string& list) {
    if (list.empty()) return {kAllGroups.begin(), kAllGroups.end()};
    std::vector<FurnitureGroup> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto g = parse_group(item);
        if (!g) throw DataError("--groups: unknown furniture group '" + item + "'");
        out.push_back(*g);
    }
    if (out.empty()) throw DataError("--groups: no groups given");
    return out;
}

fs::path require_out(const Globals& g, const char* verb) {
    if (g.out.empty()) throw DataError(std::string(verb) + " needs --out");
    return g.out;
}

int cmd_validate(const std::vector<std::string>& paths) {
    for (const auto& p : paths) {
        for (const auto& file : list_scene_files(p)) {
            const Scene s = load_scene(file);
            std::cout << "ok " << file.string() << " (" << s.id() << ": " << s.walls().size() << " walls, "
                      << s.objects().size() << " objects)\n";
        }
    }
    return kOk;
}

int cmd_synth(const Globals& g, int rooms) {
    const RunConfig c = resolve_config(g);
    SyntheticParams sp;
    sp.rooms = rooms;
    sp.seed = c.seed;
    const auto scenes = generate_rule_corpus(sp);
    save_corpus(scenes, require_out(g, "synth"));
    std::cout << "wrote " << scenes.size() << " rooms to " << g.out << "\n";
    return kOk;
}

int cmd_augment(const Globals& g, const std::string& in) {
    const RunConfig c = resolve_config(g);
    const fs::path out = require_out(g, "augment");
    const auto scenes = load_corpus(in);
    if (scenes.empty()) throw DataError(in + ": no scene files");
    const AugmentResult r = build_augmented_dataset(scenes, c.augment);
    save_corpus(r.final_corpus(), out);
    std::ostringstream report;
    write_stage_report(report, r.report);
    nn::write_file_atomic(out / "stage_report.txt", report.str());
    std::cout << report.str();
    return kOk;
}

int cmd_train(const Globals& g, const std::string& corpus) {
    const RunConfig c = resolve_config(g);
    const fs::path out = require_out(g, "train");
    const auto scenes = load_corpus(corpus);
    if (scenes.empty()) throw DataError(corpus + ": no scene files");
    const std::string fingerprint = dataset_fingerprint(scenes);
    int trained = 0;
    for (FurnitureGroup grp : resolve_groups(g.groups)) {
        const std::string name(group_name(grp));
        const bool present = std::any_of(scenes.begin(), scenes.end(), [grp](const Scene& s) {
            return std::any_of(s.objects().begin(), s.objects().end(), [grp](const auto& o) { return o.group == grp; });
        });
        if (!present) {
            std::cerr << "warning: no instances of " << name << " in the corpus; skipped\n";
            continue;
        }
        const TrainResult r = train_group(scenes, grp, c.model, c.features, c.train);
        save_bundle(r.model, out, {c.seed, fingerprint, c.train.to_json()});
        std::ostringstream csv;
        csv << "epoch,siamese_loss,ae_loss\n";
        char line[96];
        for (std::size_t e = 0; e < r.siamese_loss.size(); ++e) {
            std::snprintf(line, sizeof line, "%zu,%.10g,%.10g\n", e + 1, r.siamese_loss[e], r.ae_loss[e]);
            csv << line;
        }
        nn::write_file_atomic(bundle_path(out, grp) / "loss.csv", csv.str());
        std::cout << name << ": siamese loss " << r.siamese_loss.front() << " -> " << r.siamese_loss.back()
                  << ", autoencoder mse " << r.ae_loss.front() << " -> " << r.ae_loss.back() << "\n";
        ++trained;
    }
    if (trained == 0) throw DataError("none of the requested groups occur in the corpus");
    return kOk;
}

int cmd_place(const Globals& g, const std::string& model_dir, const std::string& scene_path,
              const std::vector<double>& dims, int k) {
    const RunConfig c = resolve_config(g);
    const auto groups = resolve_groups(g.groups);
    if (groups.size() != 1) throw DataError("place needs exactly one group in --groups");
    if (dims.size() != 3 || dims[0] <= 0 || dims[1] <= 0 || dims[2] <= 0) {
        throw DataError("--dims needs three positive extents x,y,z");
    }
    const GroupModel model = load_bundle(model_dir, groups.front());
    const Scene scene = load_scene(scene_path);
    const Vec3 d{dims[0], dims[1], dims[2]};
    const PlacementMap map = probability_map(model, scene, d, c.grid);
    if (!g.out.empty()) {
        const fs::path out = g.out;
        fs::create_directories(out);
        write_heatmap_csv(map, out / "heatmap.csv");
        write_heatmap_pgm(map, out / "heatmap.pgm");
    }
    const auto props = top_k(map, k, default_nms_radius(d));
    std::cout << "rank, x, y, P\n";
    char line[96];
    for (std::size_t i = 0; i < props.size(); ++i) {
        std::snprintf(line, sizeof line, "%zu, %.3f, %.3f, %.6g\n", i + 1, props[i].position.x, props[i].position.y,
                      props[i].probability);
        std::cout << line;
    }
    return kOk;
}

int cmd_evaluate(const Globals& g, const std::string& corpus, bool baseline, bool augment) {
    const RunConfig c = resolve_config(g);
    const auto rooms = load_corpus(corpus);
    if (rooms.size() < static_cast<std::size_t>(c.eval.folds)) {
        throw DataError("evaluate needs at least " + std::to_string(c.eval.folds) + " rooms (one per fold), got " +
                        std::to_string(rooms.size()));
    }
    FoldTrainer trainer;
    if (baseline) {
        trainer = [&](std::span<const Scene>, FurnitureGroup, int fold) -> std::shared_ptr<const PlacementScorer> {
            return std::make_shared<UniformRandomScorer>(splitmix64(c.seed + static_cast<std::uint64_t>(fold)));
        };
    } else {
        trainer = [&](std::span<const Scene> train_rooms, FurnitureGroup grp,
                      int fold) -> std::shared_ptr<const PlacementScorer> {
            TrainConfig tc = c.train;
            tc.seed = splitmix64(c.seed ^ static_cast<std::uint64_t>(fold + 1));
            std::vector<Scene> pool(train_rooms.begin(), train_rooms.end());
            if (augment) {
                AugmentParams ap = c.augment;
                ap.seed = tc.seed;
                pool = build_augmented_dataset(train_rooms, ap).final_corpus();
            }
            TrainResult r = train_group(pool, grp, c.model, c.features, tc);
            std::cerr << group_name(grp) << " fold " << fold << ": trained on " << pool.size() << " rooms\n";
            return std::make_shared<ModelScorer>(std::make_shared<const GroupModel>(std::move(r.model)));
        };
    }
    const auto groups = resolve_groups(g.groups);
    const EvalReport report = removal_experiment(rooms, groups, trainer, c.eval);
    std::ostringstream text;
    write_report_text(text, report);
    std::cout << text.str();
    if (!g.out.empty()) {
        const fs::path out = g.out;
        fs::create_directories(out);
        nn::write_file_atomic(out / "report.txt", text.str());
        nn::write_file_atomic(out / "report.json", report_json(report));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Furniture placement plausibility from scene graphs"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config, "JSON run configuration (default: $GSAC_CONFIG)");
    app.add_option("--seed", g.seed, "Global random seed");
    app.add_option("--groups", g.groups, "Comma-separated furniture groups (default: all)");
    app.add_option("--grid-cell", g.grid_cell, "Placement grid cell size in meters");
    app.add_option("--out", g.out, "Output directory");

    std::vector<std::string> validate_paths;
    auto* validate = app.add_subcommand("validate", "Parse and schema-check scene files");
    validate->add_option("paths", validate_paths, "Scene files or directories")->required();

    int synth_rooms = 120;
    auto* synth = app.add_subcommand("synth", "Generate the rule-based synthetic corpus");
    synth->add_option("--rooms", synth_rooms, "Number of rooms")->check(CLI::NonNegativeNumber);

    std::string augment_in;
    auto* augment = app.add_subcommand("augment", "Parametric augmentation, filtering and iterative removal");
    augment->add_option("corpus", augment_in, "Scene directory")->required();

    std::string train_in;
    auto* train = app.add_subcommand("train", "Train one model bundle per furniture group");
    train->add_option("corpus", train_in, "Scene directory")->required();

    std::string place_models;
    std::string place_scene;
    std::vector<double> place_dims;
    int place_k = 5;
    auto* place = app.add_subcommand("place", "Probability heatmap and top-k placements for one object");
    place->add_option("models", place_models, "Model directory")->required();
    place->add_option("scene", place_scene, "Scene file")->required();
    place->add_option("--dims", place_dims, "Object extents x y z in meters")->required()->expected(3)->delimiter(',');
    place->add_option("-k", place_k, "Number of proposals")->check(CLI::PositiveNumber);

    std::string eval_in;
    bool eval_baseline = false;
    bool eval_augment = false;
    auto* evaluate = app.add_subcommand("evaluate", "Object-removal experiment with k-fold cross validation");
    evaluate->add_option("corpus", eval_in, "Scene directory")->required();
    evaluate->add_flag("--baseline", eval_baseline, "Score with the uniform-random baseline instead of a model");
    evaluate->add_flag("--augment", eval_augment, "Augment each fold's training rooms before training");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*validate) return cmd_validate(validate_paths);
        if (*synth) return cmd_synth(g, synth_rooms);
        if (*augment) return cmd_augment(g, augment_in);
        if (*train) return cmd_train(g, train_in);
        if (*place) return cmd_place(g, place_models, place_scene, place_dims, place_k);
        if (*evaluate) return cmd_evaluate(g, eval_in, eval_baseline, eval_augment);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const ComputeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntime;
    }
    return kUsage;
}
