#include "gsac/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "gsac/error.hpp"
#include "gsac/parallel.hpp"

namespace gsac {

void TrainConfig::validate() const {
    if (epochs <= 0 || batch_pairs <= 0 || ae_batch <= 0 || negatives_per_positive <= 0) {
        throw DataError("training counts must be positive");
    }
    if (!(lr > 0.0) || !(margin > 0.0) || l2_siamese < 0.0 || l2_ae < 0.0) {
        throw DataError("training rates must be positive and L2 weights nonnegative");
    }
}

std::string TrainConfig::to_json() const {
    const nlohmann::json j{{"epochs", epochs},
                           {"batch_pairs", batch_pairs},
                           {"lr", lr},
                           {"l2_siamese", l2_siamese},
                           {"l2_ae", l2_ae},
                           {"margin", margin},
                           {"negatives_per_positive", negatives_per_positive},
                           {"ae_batch", ae_batch},
                           {"seed", seed}};
    return j.dump();
}

SceneObject LabeledPlacement::object() const {
    const Vec3 lo{center.x - dims.x / 2, center.y - dims.y / 2, bottom_z};
    return {std::string(kCandidateId), group, BoundingBox3(lo, {lo.x + dims.x, lo.y + dims.y, bottom_z + dims.z})};
}

LabeledPlacement sample_negative(std::shared_ptr<const Scene> scene, FurnitureGroup group, Vec3 dims,
                                 std::span<const Vec2> extra_truths, double support_height, double tau, Rng& rng,
                                 int max_draws) {
    if (!(scene->floor_area() > 0.0)) throw DataError("negative sampling needs a floor with positive area");
    const double radius = std::hypot(dims.x, dims.y) / 2;
    std::vector<Vec2> truths(extra_truths.begin(), extra_truths.end());
    for (const auto& o : scene->objects()) {
        if (o.group == group) truths.push_back(o.centroid_xy());
    }
    const Rect2 b = scene->bounds();
    for (int draw = 0; draw < max_draws; ++draw) {
        const Vec2 c{uniform(rng, b.min.x, b.max.x), uniform(rng, b.min.y, b.max.y)};
        if (!scene->contains_xy(c)) continue;
        const bool near_truth =
            std::any_of(truths.begin(), truths.end(), [&](Vec2 t) { return norm(c - t) < radius; });
        if (near_truth) continue;
        const SceneObject cand = make_candidate(*scene, group, dims, c, support_height, tau);
        return {std::move(scene), group, dims, c, cand.bbox.bottom(), 0};
    }
    throw ComputeError("negative sampling failed after " + std::to_string(max_draws) + " draws in '" + scene->id() +
                       "' (room saturated)");
}

double fit_support_height(std::span<const Scene> scenes, FurnitureGroup group, const FeatureParams& p) {
    double h = 0.0;
    for (const auto& s : scenes) {
        for (const auto& o : s.objects()) {
            if (o.group != group || o.bbox.bottom() <= p.support_tau) continue;
            const auto by = supp_by_counts(o, s, p);
            const bool on_object = std::accumulate(by.begin(), by.end() - 1, 0) > 0;
            if (on_object) h = std::max(h, o.bbox.bottom());
        }
    }
    return h;
}

std::size_t GroupDataset::positives() const {
    return static_cast<std::size_t>(
        std::count_if(placements.begin(), placements.end(), [](const auto& pl) { return pl.label == 1; }));
}

std::size_t GroupDataset::negatives() const { return placements.size() - positives(); }

GroupDataset build_group_dataset(std::span<const Scene> scenes, FurnitureGroup group, const FeatureParams& p,
                                 int negatives_per_positive, std::uint64_t seed) {
    GroupDataset data;
    data.support_height = fit_support_height(scenes, group, p);
    const std::string gname(group_name(group));
    for (const auto& s : scenes) {
        Rng rng = derive_rng(seed, "negatives/" + gname + "/" + s.id());
        for (const auto& o : s.objects()) {
            if (o.group != group) continue;
            auto context = std::make_shared<const Scene>(s.without_object(o.id));
            const Vec3 dims{o.bbox.length(), o.bbox.width(), o.bbox.height()};
            const Vec2 truth = o.centroid_xy();
            data.placements.push_back({context, group, dims, truth, o.bbox.bottom(), 1});
            for (int k = 0; k < negatives_per_positive; ++k) {
                data.placements.push_back(sample_negative(context, group, dims, std::span(&truth, 1),
                                                          data.support_height, p.support_tau, rng));
            }
        }
    }
    data.features.resize(data.placements.size());
    parallel_for(data.placements.size(), [&](std::size_t i) {
        const auto& pl = data.placements[i];
        data.features[i] = extract_placement_features(pl.object(), *pl.scene, p);
    });
    return data;
}

void fit_statistics(GroupModel& model, const GroupDataset& data) {
    std::vector<SummaryVector> rows;
    rows.reserve(data.features.size());
    for (const auto& f : data.features) rows.push_back(f.summary);
    model.set_standardizer(Standardizer::fit(rows));
    model.set_support_height(data.support_height);
}

std::vector<double> train_siamese(GroupModel& model, const GroupDataset& data, const TrainConfig& cfg) {
    cfg.validate();
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < data.placements.size(); ++i) (data.placements[i].label == 1 ? pos : neg).push_back(i);
    if (pos.empty() || neg.empty()) {
        throw DataError("siamese training needs both plausible and implausible placements for " +
                        std::string(group_name(model.group())));
    }

    Rng rng = derive_rng(cfg.seed, "siamese/" + std::string(group_name(model.group())));
    auto pick = [&](const std::vector<std::size_t>& v) {
        return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
    };
    nn::Adam opt(model.igatp_parameters(), {cfg.lr, 0.9, 0.999, 1e-8, cfg.l2_siamese});
    const std::size_t pairs_per_epoch = data.placements.size();
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double epoch_loss = 0.0;
        for (std::size_t done = 0; done < pairs_per_epoch;) {
            const std::size_t batch = std::min<std::size_t>(static_cast<std::size_t>(cfg.batch_pairs), pairs_per_epoch - done);
            opt.zero_grad();
            double batch_loss = 0.0;
            for (std::size_t b = 0; b < batch; ++b) {
                std::size_t i1;
                std::size_t i2;
                if (std::bernoulli_distribution(0.5)(rng)) {
                    const auto& side = std::bernoulli_distribution(0.5)(rng) ? pos : neg;
                    i1 = pick(side);
                    i2 = pick(side);
                } else {
                    i1 = pick(pos);
                    i2 = pick(neg);
                }
                const nn::Var y1 = model.igatp_forward(data.features[i1], &rng);
                const nn::Var y2 = model.igatp_forward(data.features[i2], &rng);
                const bool same = data.placements[i1].label == data.placements[i2].label;
                const nn::Var loss = nn::scale(nn::contrastive_loss(y1, y2, same, cfg.margin), 1.0 / static_cast<double>(batch));
                batch_loss += loss->value[0];
                nn::backward(loss);
            }
            opt.step();
            epoch_loss += batch_loss * static_cast<double>(batch);
            done += batch;
        }
        history.push_back(epoch_loss / static_cast<double>(pairs_per_epoch));
    }
    return history;
}

std::vector<nn::Tensor> project_positives(const GroupModel& model, const GroupDataset& data) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < data.placements.size(); ++i) {
        if (data.placements[i].label == 1) pos.push_back(i);
    }
    std::vector<nn::Tensor> out(pos.size());
    parallel_for(pos.size(), [&](std::size_t k) {
        nn::NoGradGuard no_grad;
        out[k] = model.igatp_forward(data.features[pos[k]])->value;
    });
    return out;
}

std::vector<double> train_autoencoder(GroupModel& model, std::span<const nn::Tensor> projections,
                                      const TrainConfig& cfg) {
    cfg.validate();
    if (projections.empty()) {
        throw DataError("autoencoder training needs at least one positive placement for " +
                        std::string(group_name(model.group())));
    }
    const std::size_t width = projections.front().cols();
    Rng rng = derive_rng(cfg.seed, "autoencoder/" + std::string(group_name(model.group())));
    nn::Adam opt(model.ae_parameters(), {cfg.lr, 0.9, 0.999, 1e-8, cfg.l2_ae});
    std::vector<std::size_t> order(projections.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));
    const auto batch_size = static_cast<std::size_t>(cfg.ae_batch);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            const std::size_t n = std::min(batch_size, order.size() - start);
            nn::Tensor x(n, width);
            for (std::size_t r = 0; r < n; ++r) {
                const auto row = projections[order[start + r]].row(0);
                std::copy(row.begin(), row.end(), x.data().begin() + static_cast<std::ptrdiff_t>(r * width));
            }
            opt.zero_grad();
            const nn::Var in = nn::constant(std::move(x));
            const nn::Var loss = nn::mse(in, model.reconstruct(in));
            nn::backward(loss);
            opt.step();
            epoch_loss += loss->value[0] * static_cast<double>(n);
        }
        history.push_back(epoch_loss / static_cast<double>(order.size()));
    }
    return history;
}

TrainResult train_group(std::span<const Scene> scenes, FurnitureGroup group, const ModelDims& dims,
                        const FeatureParams& features, const TrainConfig& cfg) {
    cfg.validate();
    const GroupDataset data = build_group_dataset(scenes, group, features, cfg.negatives_per_positive, cfg.seed);
    if (data.positives() == 0) throw DataError("no instances of " + std::string(group_name(group)) + " to train on");
    TrainResult result{GroupModel(group, dims, features, cfg.seed), {}, {}};
    fit_statistics(result.model, data);
    result.siamese_loss = train_siamese(result.model, data, cfg);
    const auto projections = project_positives(result.model, data);
    result.ae_loss = train_autoencoder(result.model, projections, cfg);
    return result;
}

std::string dataset_fingerprint(std::span<const Scene> scenes) {
    std::uint64_t h = fnv1a("gsac-corpus");
    auto mix = [&h](std::string_view s) { h = splitmix64(h ^ fnv1a(s)); };
    char buf[64];
    auto mix_num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        mix(buf);
    };
    for (const auto& s : scenes) {
        mix(s.id());
        mix(s.room_type());
        for (const auto& w : s.walls()) {
            mix(w.id);
            mix_num(w.segment.a.x);
            mix_num(w.segment.a.y);
            mix_num(w.segment.b.x);
            mix_num(w.segment.b.y);
        }
        for (const auto& o : s.objects()) {
            mix(o.id);
            mix(group_name(o.group));
            for (double v : {o.bbox.min().x, o.bbox.min().y, o.bbox.min().z, o.bbox.max().x, o.bbox.max().y, o.bbox.max().z}) {
                mix_num(v);
            }
        }
    }
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace gsac
