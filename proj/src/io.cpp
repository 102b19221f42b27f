#include "gsac/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gsac/error.hpp"
#include "gsac/nn/serialize.hpp"

namespace gsac {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw DataError(path + ": " + what); }

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            fail(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

const json& require(const json& j, const std::string& path, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) fail(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

std::vector<double> get_point(const json& j, const std::string& path, std::size_t n) {
    if (!j.is_array() || j.size() != n) fail(path, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

}  // namespace

Scene scene_from_json(std::string_view text, const std::string& source) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(source + ": not valid JSON: " + e.what());
    }
    try {
        reject_unknown(j, "", {"schema_version", "id", "room_type", "walls", "objects"});
        const json& ver = require(j, "", "schema_version");
        if (!ver.is_number_integer() || ver.get<int>() != kSceneSchemaVersion) {
            fail("schema_version", "unsupported (expected " + std::to_string(kSceneSchemaVersion) + ")");
        }
        const std::string id = get_string(require(j, "", "id"), "id");
        if (id.empty()) fail("id", "must not be empty");
        const std::string room_type = j.contains("room_type") ? get_string(j["room_type"], "room_type") : "";

        const json& jw = require(j, "", "walls");
        if (!jw.is_array()) fail("walls", "expected an array");
        std::vector<Wall> walls;
        for (std::size_t i = 0; i < jw.size(); ++i) {
            const std::string p = "walls[" + std::to_string(i) + "]";
            reject_unknown(jw[i], p, {"id", "from", "to"});
            const std::string wid = jw[i].contains("id") ? get_string(jw[i]["id"], p + ".id") : "w" + std::to_string(i);
            const auto a = get_point(require(jw[i], p, "from"), p + ".from", 2);
            const auto b = get_point(require(jw[i], p, "to"), p + ".to", 2);
            walls.push_back({wid, {{a[0], a[1]}, {b[0], b[1]}}});
        }

        std::vector<SceneObject> objects;
        std::set<std::string> ids;
        if (j.contains("objects")) {
            const json& jo = j["objects"];
            if (!jo.is_array()) fail("objects", "expected an array");
            for (std::size_t i = 0; i < jo.size(); ++i) {
                const std::string p = "objects[" + std::to_string(i) + "]";
                reject_unknown(jo[i], p, {"id", "group", "min", "max"});
                const std::string oid = get_string(require(jo[i], p, "id"), p + ".id");
                if (!ids.insert(oid).second) fail(p + ".id", "duplicate object id '" + oid + "'");
                const std::string label = get_string(require(jo[i], p, "group"), p + ".group");
                const auto g = parse_group(label);
                if (!g) fail(p + ".group", "unknown furniture group '" + label + "'");
                const auto lo = get_point(require(jo[i], p, "min"), p + ".min", 3);
                const auto hi = get_point(require(jo[i], p, "max"), p + ".max", 3);
                static constexpr const char* axes[3] = {"x", "y", "z"};
                for (int a = 0; a < 3; ++a) {
                    if (lo[a] > hi[a]) fail(p + ".max." + axes[a], std::string("smaller than min.") + axes[a]);
                }
                objects.push_back({oid, *g, BoundingBox3({lo[0], lo[1], lo[2]}, {hi[0], hi[1], hi[2]})});
            }
        }
        try {
            return Scene(id, room_type, std::move(walls), std::move(objects));
        } catch (const DataError& e) {
            fail("walls", e.what());
        }
    } catch (const DataError& e) {
        throw DataError(source + ": " + e.what());
    }
}

std::string scene_to_json(const Scene& s) {
    nlohmann::ordered_json walls = nlohmann::ordered_json::array();
    for (const auto& w : s.walls()) {
        walls.push_back({{"id", w.id}, {"from", {w.segment.a.x, w.segment.a.y}}, {"to", {w.segment.b.x, w.segment.b.y}}});
    }
    nlohmann::ordered_json objects = nlohmann::ordered_json::array();
    for (const auto& o : s.objects()) {
        const Vec3 lo = o.bbox.min();
        const Vec3 hi = o.bbox.max();
        objects.push_back({{"id", o.id},
                           {"group", std::string(group_name(o.group))},
                           {"min", {lo.x, lo.y, lo.z}},
                           {"max", {hi.x, hi.y, hi.z}}});
    }
    const nlohmann::ordered_json j{{"schema_version", kSceneSchemaVersion},
                                   {"id", s.id()},
                                   {"room_type", s.room_type()},
                                   {"walls", walls},
                                   {"objects", objects}};
    return j.dump(2) + "\n";
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError(path.string() + ": cannot open");
    std::ostringstream ss;
    ss << is.rdbuf();
    return scene_from_json(ss.str(), path.string());
}

void save_scene(const Scene& s, const std::filesystem::path& path) { nn::write_file_atomic(path, scene_to_json(s)); }

std::vector<std::filesystem::path> list_scene_files(const std::filesystem::path& dir_or_file) {
    if (std::filesystem::is_regular_file(dir_or_file)) return {dir_or_file};
    if (!std::filesystem::is_directory(dir_or_file)) throw DataError(dir_or_file.string() + ": no such file or directory");
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir_or_file)) {
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Scene> load_corpus(const std::filesystem::path& dir_or_file) {
    std::vector<Scene> out;
    for (const auto& p : list_scene_files(dir_or_file)) out.push_back(load_scene(p));
    return out;
}

void save_corpus(std::span<const Scene> scenes, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& s : scenes) save_scene(s, dir / (s.id() + ".json"));
}

void RunConfig::apply_seed(std::uint64_t s) {
    seed = s;
    augment.seed = s;
    train.seed = s;
    eval.seed = s;
}

namespace {

template <class T>
void read_field(const json& j, const std::string& path, const char* key, T& dst) {
    const auto it = j.find(key);
    if (it == j.end()) return;
    try {
        dst = it->template get<T>();
    } catch (const json::exception&) {
        fail(path + "." + key, "wrong type");
    }
}

}  // namespace

RunConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c;
    reject_unknown(j, "", {"seed", "features", "augment", "train", "model", "grid", "eval"});
    if (j.contains("features")) {
        const json& f = j["features"];
        reject_unknown(f, "features", {"rho_fraction", "support_tau", "single_rho"});
        read_field(f, "features", "rho_fraction", c.features.rho_fraction);
        read_field(f, "features", "support_tau", c.features.support_tau);
        read_field(f, "features", "single_rho", c.features.single_rho);
    }
    if (j.contains("augment")) {
        const json& a = j["augment"];
        reject_unknown(a, "augment",
                       {"variants_per_room", "wall_offset_max", "falloff_lambda", "open_space_max", "overlap_max",
                        "removal_n", "removal", "max_attempts", "open_space_resolution"});
        read_field(a, "augment", "variants_per_room", c.augment.variants_per_room);
        read_field(a, "augment", "wall_offset_max", c.augment.wall_offset_max);
        read_field(a, "augment", "falloff_lambda", c.augment.falloff_lambda);
        read_field(a, "augment", "open_space_max", c.augment.open_space_max);
        read_field(a, "augment", "overlap_max", c.augment.overlap_max);
        read_field(a, "augment", "removal_n", c.augment.removal_n);
        read_field(a, "augment", "removal", c.augment.removal);
        read_field(a, "augment", "max_attempts", c.augment.max_attempts);
        read_field(a, "augment", "open_space_resolution", c.augment.open_space_resolution);
    }
    if (j.contains("train")) {
        const json& t = j["train"];
        reject_unknown(t, "train",
                       {"epochs", "batch_pairs", "lr", "l2_siamese", "l2_ae", "margin", "negatives_per_positive",
                        "ae_batch"});
        read_field(t, "train", "epochs", c.train.epochs);
        read_field(t, "train", "batch_pairs", c.train.batch_pairs);
        read_field(t, "train", "lr", c.train.lr);
        read_field(t, "train", "l2_siamese", c.train.l2_siamese);
        read_field(t, "train", "l2_ae", c.train.l2_ae);
        read_field(t, "train", "margin", c.train.margin);
        read_field(t, "train", "negatives_per_positive", c.train.negatives_per_positive);
        read_field(t, "train", "ae_batch", c.train.ae_batch);
    }
    if (j.contains("model")) {
        const json& m = j["model"];
        reject_unknown(m, "model",
                       {"preset", "init_hidden", "gat_in", "gat_heads", "gat_head_dim", "gat_dropout",
                        "gat_negative_slope", "proj_hidden", "proj_out", "ae_hidden"});
        if (m.contains("preset")) {
            const std::string preset = get_string(m["preset"], "model.preset");
            if (preset == "reduced") {
                c.model = ModelDims::reduced();
            } else if (preset != "full") {
                fail("model.preset", "expected \"full\" or \"reduced\"");
            }
        }
        read_field(m, "model", "init_hidden", c.model.init_hidden);
        read_field(m, "model", "gat_in", c.model.gat_in);
        read_field(m, "model", "gat_heads", c.model.gat_heads);
        read_field(m, "model", "gat_head_dim", c.model.gat_head_dim);
        read_field(m, "model", "gat_dropout", c.model.gat_dropout);
        read_field(m, "model", "gat_negative_slope", c.model.gat_negative_slope);
        read_field(m, "model", "proj_hidden", c.model.proj_hidden);
        read_field(m, "model", "proj_out", c.model.proj_out);
        read_field(m, "model", "ae_hidden", c.model.ae_hidden);
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        reject_unknown(g, "grid", {"cell_size", "samples_per_side"});
        read_field(g, "grid", "cell_size", c.grid.cell_size);
        read_field(g, "grid", "samples_per_side", c.grid.samples_per_side);
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        reject_unknown(e, "eval", {"folds", "train_split", "k", "nms_radius"});
        read_field(e, "eval", "folds", c.eval.folds);
        read_field(e, "eval", "train_split", c.eval.train_split);
        read_field(e, "eval", "k", c.eval.k);
        read_field(e, "eval", "nms_radius", c.eval.nms_radius);
    }
    std::uint64_t seed = 0;
    read_field(j, "", "seed", seed);
    c.apply_seed(seed);
    c.eval.grid = c.grid;

    c.features.validate();
    c.augment.validate();
    c.train.validate();
    c.model.validate();
    c.eval.validate();
    return c;
}

std::string config_to_json(const RunConfig& c) {
    const json j{
        {"seed", c.seed},
        {"features",
         {{"rho_fraction", c.features.rho_fraction},
          {"support_tau", c.features.support_tau},
          {"single_rho", c.features.single_rho}}},
        {"augment",
         {{"variants_per_room", c.augment.variants_per_room},
          {"wall_offset_max", c.augment.wall_offset_max},
          {"falloff_lambda", c.augment.falloff_lambda},
          {"open_space_max", c.augment.open_space_max},
          {"overlap_max", c.augment.overlap_max},
          {"removal_n", c.augment.removal_n},
          {"removal", c.augment.removal},
          {"max_attempts", c.augment.max_attempts},
          {"open_space_resolution", c.augment.open_space_resolution}}},
        {"train", json::parse(c.train.to_json())},
        {"model",
         {{"init_hidden", c.model.init_hidden},
          {"gat_in", c.model.gat_in},
          {"gat_heads", c.model.gat_heads},
          {"gat_head_dim", c.model.gat_head_dim},
          {"gat_dropout", c.model.gat_dropout},
          {"gat_negative_slope", c.model.gat_negative_slope},
          {"proj_hidden", c.model.proj_hidden},
          {"proj_out", c.model.proj_out},
          {"ae_hidden", c.model.ae_hidden}}},
        {"grid", {{"cell_size", c.grid.cell_size}, {"samples_per_side", c.grid.samples_per_side}}},
        {"eval",
         {{"folds", c.eval.folds}, {"train_split", c.eval.train_split}, {"k", c.eval.k}, {"nms_radius", c.eval.nms_radius}}}};
    json out = j;
    out["train"].erase("seed");
    return out.dump(2) + "\n";
}

RunConfig load_run_config(const std::optional<std::filesystem::path>& explicit_path) {
    std::optional<std::filesystem::path> path = explicit_path;
    if (!path) {
        if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') path = env;
    }
    if (!path) return RunConfig{};
    std::ifstream is(*path);
    if (!is) throw DataError(path->string() + ": cannot open config");
    std::ostringstream ss;
    ss << is.rdbuf();
    try {
        return config_from_json(ss.str());
    } catch (const DataError& e) {
        throw DataError(path->string() + ": " + e.what());
    }
}

}  // namespace gsac
