#include "gsac/model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <fstream>

#include <json.hpp>

#include "gsac/error.hpp"

namespace gsac {

using nlohmann::json;

ModelDims ModelDims::reduced() {
    ModelDims d;
    d.init_hidden = {32, 32, 32};
    d.gat_in = 32;
    d.gat_heads = 4;
    d.gat_head_dim = 8;
    d.proj_hidden = {128, 64, 32};
    d.proj_out = 16;
    d.ae_hidden = {12, 8, 4};
    return d;
}

std::vector<std::size_t> ModelDims::init_widths() const {
    std::vector<std::size_t> w{kNodeFeatureSize};
    w.insert(w.end(), init_hidden.begin(), init_hidden.end());
    w.push_back(gat_in);
    return w;
}

std::vector<std::size_t> ModelDims::proj_widths() const {
    std::vector<std::size_t> w{kRelationCount * gat_out() + summary::kSize};
    w.insert(w.end(), proj_hidden.begin(), proj_hidden.end());
    w.push_back(proj_out);
    return w;
}

std::vector<std::size_t> ModelDims::ae_widths() const {
    std::vector<std::size_t> w{proj_out};
    w.insert(w.end(), ae_hidden.begin(), ae_hidden.end());
    for (auto it = ae_hidden.rbegin() + 1; it < ae_hidden.rend(); ++it) w.push_back(*it);
    w.push_back(proj_out);
    return w;
}

void ModelDims::validate() const {
    auto positive = [](std::size_t v) { return v > 0; };
    if (!std::all_of(init_hidden.begin(), init_hidden.end(), positive) ||
        !std::all_of(proj_hidden.begin(), proj_hidden.end(), positive) ||
        !std::all_of(ae_hidden.begin(), ae_hidden.end(), positive)) {
        throw DataError("model widths must be positive");
    }
    if (ae_hidden.empty()) throw DataError("autoencoder needs at least one hidden width");
    if (gat_in == 0 || gat_heads == 0 || gat_head_dim == 0 || proj_out == 0) throw DataError("model widths must be positive");
    if (!(gat_dropout >= 0.0 && gat_dropout < 1.0)) throw DataError("gat dropout must lie in [0, 1)");
}

SceneObject make_candidate(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center, double support_height,
                           double tau) {
    const BoundingBox3 flat = BoundingBox3::from_center({center.x, center.y, dims.z / 2}, dims);
    double bottom = 0.0;
    for (const auto& o : scene.objects()) {
        if (o.bbox.top() <= support_height + tau && o.bbox.top() > bottom && bbox_xy_intersects(flat, o.bbox)) {
            bottom = o.bbox.top();
        }
    }
    const Vec3 lo{center.x - dims.x / 2, center.y - dims.y / 2, bottom};
    return {std::string(kCandidateId), group, BoundingBox3(lo, {lo.x + dims.x, lo.y + dims.y, bottom + dims.z})};
}

PlacementFeatures extract_placement_features(const SceneObject& candidate, const Scene& scene, const FeatureParams& p) {
    if (!scene.contains_xy(candidate.centroid_xy())) {
        throw DataError("placement center lies outside the floor polygon of '" + scene.id() + "'");
    }
    return {extract_graphs(candidate, scene, p), summary_vector(candidate, scene, p)};
}

GroupModel::GroupModel(FurnitureGroup group, ModelDims dims, FeatureParams features, std::uint64_t seed)
    : group_(group), dims_(std::move(dims)), features_(features) {
    dims_.validate();
    features_.validate();
    Rng rng = derive_rng(seed, "model/" + std::string(group_name(group)));
    init_ = nn::Mlp::make(dims_.init_widths(), rng);
    const nn::GatConfig gc{dims_.gat_in, dims_.gat_heads, dims_.gat_head_dim, dims_.gat_dropout, dims_.gat_negative_slope};
    for (auto& g : gat_) g = nn::GatLayer::make(gc, rng);
    proj_ = nn::Mlp::make(dims_.proj_widths(), rng);
    ae_ = nn::Mlp::make(dims_.ae_widths(), rng);
}

std::vector<nn::Var> GroupModel::igatp_parameters() const {
    auto out = init_.parameters();
    for (const auto& g : gat_) {
        for (auto& p : g.parameters()) out.push_back(p);
    }
    for (auto& p : proj_.parameters()) out.push_back(p);
    return out;
}

std::vector<nn::Var> GroupModel::ae_parameters() const { return ae_.parameters(); }

nn::Var GroupModel::igatp_forward(const PlacementFeatures& f, Rng* dropout_rng) const {
    return igatp_forward(f, dropout_rng, nullptr);
}

nn::Var GroupModel::igatp_forward(const PlacementFeatures& f, Rng* dropout_rng,
                                  std::array<nn::Var, kRelationCount>* messages) const {
    if (!standardizer_.fitted()) throw ComputeError("igatp_forward: standardizer not fitted");

    // INIT runs once over the nodes of all six graphs stacked together.
    std::size_t total = 0;
    for (const auto& g : f.graphs) total += g.nodes.size();
    nn::Tensor nodes(total, kNodeFeatureSize);
    std::size_t row = 0;
    for (const auto& g : f.graphs) {
        for (const auto& n : g.nodes) {
            for (std::size_t c = 0; c < kNodeFeatureSize; ++c) nodes(row, c) = n.feature[c];
            ++row;
        }
    }
    const nn::Var embedded = init_.forward(nn::constant(std::move(nodes)));

    std::vector<nn::Var> parts;
    parts.reserve(kRelationCount + 1);
    std::size_t offset = 0;
    for (std::size_t r = 0; r < kRelationCount; ++r) {
        const SceneGraph& g = f.graphs[r];
        const nn::Var x = nn::slice_rows(embedded, offset, g.nodes.size());
        const nn::Var z = gat_[r].forward(x, g.edges, dropout_rng);
        nn::Var message = nn::select_row(z, static_cast<std::size_t>(g.target_index));
        if (messages) (*messages)[r] = message;
        parts.push_back(std::move(message));
        offset += g.nodes.size();
    }
    const SummaryVector standardized = standardizer_.apply(f.summary);
    parts.push_back(nn::constant(nn::Tensor::row_vector(standardized)));
    nn::Var y = proj_.forward(nn::concat_cols(parts));
    y->value.check_finite("igatp output");
    return y;
}

nn::Var GroupModel::reconstruct(const nn::Var& projected) const { return ae_.forward(projected); }

double GroupModel::reconstruction_error(const nn::Tensor& projected) const {
    nn::NoGradGuard no_grad;
    const nn::Var y = nn::constant(projected);
    return nn::mse(y, reconstruct(y))->value[0];
}

double GroupModel::plausibility(const nn::Tensor& projected) const { return std::exp(-reconstruction_error(projected)); }

nn::Tensor GroupModel::project(const SceneObject& candidate, const Scene& scene) const {
    nn::NoGradGuard no_grad;
    return igatp_forward(extract_placement_features(candidate, scene, features_))->value;
}

double GroupModel::score(const SceneObject& candidate, const Scene& scene) const {
    return plausibility(project(candidate, scene));
}

namespace {

void add_mlp(nn::NamedTensors& out, const std::string& prefix, const nn::Mlp& mlp) {
    for (std::size_t i = 0; i < mlp.layers().size(); ++i) {
        out.emplace_back(prefix + "." + std::to_string(i) + ".weight", mlp.layers()[i].weight->value);
        out.emplace_back(prefix + "." + std::to_string(i) + ".bias", mlp.layers()[i].bias->value);
    }
}

}  // namespace

nn::NamedTensors GroupModel::named_tensors() const {
    nn::NamedTensors out;
    add_mlp(out, "init", init_);
    for (std::size_t r = 0; r < kRelationCount; ++r) {
        const std::string prefix = "gat." + std::string(relation_name(static_cast<Relation>(r)));
        const auto params = gat_[r].parameters();
        out.emplace_back(prefix + ".weight", params[0]->value);
        out.emplace_back(prefix + ".att_src", params[1]->value);
        out.emplace_back(prefix + ".att_dst", params[2]->value);
    }
    add_mlp(out, "proj", proj_);
    add_mlp(out, "ae", ae_);
    if (standardizer_.fitted()) {
        out.emplace_back("standardizer.mean", nn::Tensor::row_vector(standardizer_.mean()));
        out.emplace_back("standardizer.std", nn::Tensor::row_vector(standardizer_.stddev()));
    }
    out.emplace_back("support_height", nn::Tensor(1, 1, support_height_));
    return out;
}

void GroupModel::load_tensors(const nn::NamedTensors& tensors) {
    std::unordered_map<std::string, const nn::Tensor*> by_name;
    for (const auto& [name, t] : tensors) by_name.emplace(name, &t);
    auto take = [&](const std::string& name, nn::Tensor& dst) {
        const auto it = by_name.find(name);
        if (it == by_name.end()) throw DataError("model parameters are missing '" + name + "'");
        if (it->second->rows() != dst.rows() || it->second->cols() != dst.cols()) {
            throw DataError("model parameter '" + name + "' has the wrong shape");
        }
        dst = *it->second;
    };
    auto take_mlp = [&](const std::string& prefix, const nn::Mlp& mlp) {
        for (std::size_t i = 0; i < mlp.layers().size(); ++i) {
            take(prefix + "." + std::to_string(i) + ".weight", mlp.layers()[i].weight->value);
            take(prefix + "." + std::to_string(i) + ".bias", mlp.layers()[i].bias->value);
        }
    };
    take_mlp("init", init_);
    for (std::size_t r = 0; r < kRelationCount; ++r) {
        const std::string prefix = "gat." + std::string(relation_name(static_cast<Relation>(r)));
        const auto params = gat_[r].parameters();
        take(prefix + ".weight", params[0]->value);
        take(prefix + ".att_src", params[1]->value);
        take(prefix + ".att_dst", params[2]->value);
    }
    take_mlp("proj", proj_);
    take_mlp("ae", ae_);
    const auto mean = by_name.find("standardizer.mean");
    const auto sd = by_name.find("standardizer.std");
    if (mean != by_name.end() && sd != by_name.end()) {
        const auto m = mean->second->data();
        const auto s = sd->second->data();
        standardizer_ = Standardizer({m.begin(), m.end()}, {s.begin(), s.end()});
    }
    nn::Tensor h(1, 1);
    take("support_height", h);
    support_height_ = h[0];
}

namespace {

json dims_to_json(const ModelDims& d) {
    return {{"init_hidden", d.init_hidden},   {"gat_in", d.gat_in},
            {"gat_heads", d.gat_heads},       {"gat_head_dim", d.gat_head_dim},
            {"gat_dropout", d.gat_dropout},   {"gat_negative_slope", d.gat_negative_slope},
            {"proj_hidden", d.proj_hidden},   {"proj_out", d.proj_out},
            {"ae_hidden", d.ae_hidden}};
}

ModelDims dims_from_json(const json& j) {
    ModelDims d;
    d.init_hidden = j.at("init_hidden").get<std::vector<std::size_t>>();
    d.gat_in = j.at("gat_in").get<std::size_t>();
    d.gat_heads = j.at("gat_heads").get<std::size_t>();
    d.gat_head_dim = j.at("gat_head_dim").get<std::size_t>();
    d.gat_dropout = j.at("gat_dropout").get<double>();
    d.gat_negative_slope = j.at("gat_negative_slope").get<double>();
    d.proj_hidden = j.at("proj_hidden").get<std::vector<std::size_t>>();
    d.proj_out = j.at("proj_out").get<std::size_t>();
    d.ae_hidden = j.at("ae_hidden").get<std::vector<std::size_t>>();
    return d;
}

}  // namespace

std::filesystem::path bundle_path(const std::filesystem::path& model_dir, FurnitureGroup g) {
    return model_dir / std::string(group_name(g));
}

void save_bundle(const GroupModel& model, const std::filesystem::path& model_dir, const BundleManifest& manifest) {
    const auto dir = bundle_path(model_dir, model.group());
    std::filesystem::create_directories(dir);
    nn::save_params(dir / "params.bin", model.named_tensors());
    json m{{"format_version", kBundleFormatVersion},
           {"group", std::string(group_name(model.group()))},
           {"dims", dims_to_json(model.dims())},
           {"features",
            {{"rho_fraction", model.feature_params().rho_fraction},
             {"support_tau", model.feature_params().support_tau},
             {"single_rho", model.feature_params().single_rho}}},
           {"seed", manifest.seed},
           {"dataset_fingerprint", manifest.dataset_fingerprint},
           {"train", json::parse(manifest.train_config_json)}};
    nn::write_file_atomic(dir / "manifest.json", m.dump(2) + "\n");
}

GroupModel load_bundle(const std::filesystem::path& model_dir, FurnitureGroup g) {
    const auto dir = bundle_path(model_dir, g);
    std::ifstream is(dir / "manifest.json");
    if (!is) throw DataError("no model bundle for group " + std::string(group_name(g)) + " in " + model_dir.string());
    json m;
    try {
        m = json::parse(is);
        if (m.at("format_version").get<int>() != kBundleFormatVersion) throw DataError("unsupported bundle format version");
        FeatureParams fp;
        fp.rho_fraction = m.at("features").at("rho_fraction").get<double>();
        fp.support_tau = m.at("features").at("support_tau").get<double>();
        fp.single_rho = m.at("features").at("single_rho").get<bool>();
        GroupModel model(g, dims_from_json(m.at("dims")), fp, m.at("seed").get<std::uint64_t>());
        model.load_tensors(nn::load_params(dir / "params.bin"));
        return model;
    } catch (const json::exception& e) {
        throw DataError("malformed bundle manifest in " + dir.string() + ": " + e.what());
    }
}

}  // namespace gsac
