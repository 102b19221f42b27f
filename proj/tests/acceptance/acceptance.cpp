// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "gsac/augment.hpp"
#include "gsac/features.hpp"
#include "gsac/graphs.hpp"
#include "gsac/placement.hpp"
#include "gsac/scorers.hpp"
#include "gsac/synthetic.hpp"
#include "gsac/training.hpp"
#include "../support/gradcheck.hpp"
#include "../support/oracles.hpp"
#include "../support/tempdir.hpp"

using namespace gsac;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c, d);
    return buf;
}

// ---------------------------------------------------------------------------------------------------------

Outcome geometric_oracle() {
    const FeatureParams p;
    Rng rng(101);
    long checked = 0;
    long mismatches = 0;
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Scene s = oracle::random_scene(rng, 3 + t % 10, "scene" + std::to_string(t));
        for (const auto& o : s.objects()) {
            const auto ref = oracle::features(o, s, p.rho_fraction, p.support_tau);
            auto count = [&](bool ok) {
                ++checked;
                if (!ok) ++mismatches;
            };
            auto dist = [&](double a, double b) {
                ++checked;
                worst = std::max(worst, std::abs(a - b));
                if (std::abs(a - b) > 1e-3) ++mismatches;
            };
            count(room_position(o, s, p) == ref.near);
            for (const auto& w : s.walls()) {
                count(near_wall(o, w, s, p) == (oracle::footprint_segment_distance(o.bbox, w.segment) < oracle::rho(w, s, p.rho_fraction)));
                dist(bbox_wall_distance(o.bbox, w), oracle::footprint_segment_distance(o.bbox, w.segment));
            }
            for (const auto& other : s.objects()) {
                dist(bbox_distance(o.bbox, other.bbox), oracle::box_distance(o.bbox, other.bbox));
                if (other.id != o.id) count(support_sign(o, other, p) == oracle::support(o, other, p.support_tau));
            }
            const auto ix = intersect_xy_counts(o, s);
            const auto sby = supp_by_counts(o, s, p);
            const auto sto = supp_to_counts(o, s, p);
            for (std::size_t i = 0; i <= static_cast<std::size_t>(kGroupCount); ++i) {
                count(ix[i] == ref.ix[i]);
                count(sby[i] == ref.sby[i]);
                count(sto[i] == ref.sto[i]);
            }
            for (FurnitureGroup g : kAllGroups) {
                const auto gi = static_cast<std::size_t>(group_index(g));
                dist(avg_dist(o, g, s), ref.avg[gi]);
                count(surrounded_by(o, g, s) == ref.surrounded[gi]);
            }
            const auto tc = three_closest(o, s);
            for (std::size_t i = 0; i < 3; ++i) count(tc[i] == ref.closest[i]);
        }
    }
    return {mismatches == 0, fmt("%.0f checks, %.0f mismatches, max distance deviation %.2g m", static_cast<double>(checked),
                                 static_cast<double>(mismatches), worst)};
}

Outcome summary_contract() {
    const FeatureParams p;
    Rng rng(202);
    long bad = 0;
    int done = 0;
    while (done < 10000) {
        const Scene s = oracle::random_scene(rng, 3 + done % 10, "s");
        for (int k = 0; k < 50 && done < 10000; ++k, ++done) {
            const Vec2 c = oracle::random_floor_point(s, rng);
            const Vec3 dims{uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 2.0), uniform(rng, 0.2, 1.5)};
            const SceneObject cand = make_candidate(s, group_from_index(k % kGroupCount), dims, c, 1.0, p.support_tau);
            const SummaryVector x = summary_vector(cand, s, p);
            bool ok = x.size() == 48;
            const double eb = x[summary::kEdge];
            const double cb = x[summary::kCorner];
            ok = ok && (eb == 0 || eb == 1) && (cb == 0 || cb == 1) && (eb + cb == 0 || eb + cb == 1);
            const int near = room_position(cand, s, p);
            ok = ok && eb == (near == 1 ? 1.0 : 0.0) && cb == (near >= 2 ? 1.0 : 0.0);
            const auto tc = three_closest(cand, s);
            for (std::size_t i = 0; i < 3; ++i) ok = ok && x[summary::kThreeClosest + i] == tc[i];
            const auto ix = intersect_xy_counts(cand, s);
            const auto sby = supp_by_counts(cand, s, p);
            const auto sto = supp_to_counts(cand, s, p);
            for (std::size_t i = 0; i < 9; ++i) {
                ok = ok && x[summary::kIntersect + i] == ix[i] && x[summary::kSuppBy + i] == sby[i] &&
                     x[summary::kSuppTo + i] == sto[i];
            }
            for (FurnitureGroup g : kAllGroups) {
                const auto gi = static_cast<std::size_t>(group_index(g));
                ok = ok && x[summary::kAvgDist + gi] == avg_dist(cand, g, s) && x[summary::kSurrounded + gi] == surrounded_by(cand, g, s);
            }
            if (!ok) ++bad;
        }
    }
    return {bad == 0, fmt("%.0f placements, %.0f layout violations", done, static_cast<double>(bad))};
}

Outcome graph_contract() {
    const FeatureParams p;
    Rng rng(303);
    long edges = 0;
    long bad = 0;
    for (int t = 0; t < 200; ++t) {
        const Scene s = oracle::random_scene(rng, 3 + t % 10, "g");
        for (const auto& o : s.objects()) {
            const SceneGraphSet graphs = extract_graphs(o, s, p);
            for (const auto& g : graphs) {
                edges += static_cast<long>(g.edges.size());
                if (g.edges.empty()) ++bad;
                for (const auto& e : g.edges) {
                    if (e.target != g.target_index) ++bad;
                }
                // Expected source ids from per-pair predicates.
                std::vector<std::string> want;
                for (const auto& other : s.objects()) {
                    if (other.id == o.id) continue;
                    bool hit = false;
                    switch (g.relation) {
                        case Relation::IX: hit = oracle::footprints_touch(o.bbox, other.bbox); break;
                        case Relation::SB:
                            hit = oracle::box_distance(o.bbox, other.bbox) < std::hypot(o.bbox.length(), o.bbox.width());
                            break;
                        case Relation::SBY: hit = oracle::support(o, other, p.support_tau) == 1; break;
                        case Relation::STO: hit = oracle::support(o, other, p.support_tau) == -1; break;
                        case Relation::CO: hit = true; break;
                        case Relation::RP: break;
                    }
                    if (hit) want.push_back(other.id);
                }
                if (g.relation == Relation::RP) {
                    for (const auto& w : s.walls()) {
                        if (oracle::footprint_segment_distance(o.bbox, w.segment) < oracle::rho(w, s, p.rho_fraction)) want.push_back(w.id);
                    }
                    if (want.empty()) want.push_back("floor");
                }
                if (want.empty()) want.push_back("default");
                std::vector<std::string> got;
                for (const auto& e : g.edges) got.push_back(g.nodes[static_cast<std::size_t>(e.source)].source_id);
                std::sort(want.begin(), want.end());
                std::sort(got.begin(), got.end());
                if (want != got) ++bad;
            }
        }
    }
    return {bad == 0, fmt("%.0f edges checked, %.0f graph mismatches", static_cast<double>(edges), static_cast<double>(bad))};
}

nn::Tensor random_tensor(std::size_t r, std::size_t c, Rng& rng) {
    nn::Tensor t(r, c);
    for (double& v : t.data()) v = uniform(rng, -1, 1);
    return t;
}

Outcome gradient_suite() {
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Rng rng(seed);
        // Linear layers with MSE.
        const nn::Mlp mlp = nn::Mlp::make(std::vector<std::size_t>{5, 7, 3}, rng);
        const nn::Var x = nn::constant(random_tensor(4, 5, rng));
        const nn::Var target = nn::constant(random_tensor(4, 3, rng));
        worst = std::max(worst, gradcheck::max_relative_error(mlp.parameters(), [&] { return nn::mse(mlp.forward(x), target); }));

        // GAT layer, eval mode.
        const nn::GatLayer gat = nn::GatLayer::make({4, 3, 2, 0.8, 0.2}, rng);
        const nn::Var nodes = nn::constant(random_tensor(5, 4, rng));
        const std::vector<Edge> edges{{1, 0}, {2, 0}, {3, 0}, {4, 0}};
        const nn::Var gat_target = nn::constant(random_tensor(5, 6, rng));
        worst = std::max(worst, gradcheck::max_relative_error(gat.parameters(), [&] {
                             return nn::mse(gat.forward(nodes, edges), gat_target);
                         }));

        // Contrastive loss, both branches.
        const nn::Var y1 = nn::parameter(random_tensor(1, 4, rng));
        const nn::Var y2 = nn::parameter(random_tensor(1, 4, rng));
        worst = std::max(worst, gradcheck::max_relative_error({y1, y2}, [&] { return nn::contrastive_loss(y1, y2, true, 15); }));
        worst = std::max(worst, gradcheck::max_relative_error({y1, y2}, [&] { return nn::contrastive_loss(y1, y2, false, 15); }));

        // Full IGATP composite on two real placements.
        ModelDims dims;
        dims.init_hidden = {6, 6, 6};
        dims.gat_in = 6;
        dims.gat_heads = 2;
        dims.gat_head_dim = 3;
        dims.proj_hidden = {10, 8, 8};
        dims.proj_out = 4;
        dims.ae_hidden = {3, 2, 2};
        GroupModel model(FurnitureGroup::Chair, dims, {}, seed);
        const Scene s = oracle::random_scene(rng, 6, "grad");
        std::vector<SummaryVector> rows;
        for (const auto& o : s.objects()) rows.push_back(summary_vector(o, s, {}));
        model.set_standardizer(Standardizer::fit(rows));
        const auto f1 = extract_placement_features(
            make_candidate(s, FurnitureGroup::Chair, {0.4, 0.6, 0.8}, oracle::random_floor_point(s, rng), 0.0, 0.05), s, {});
        const auto f2 = extract_placement_features(
            make_candidate(s, FurnitureGroup::Chair, {0.5, 0.5, 0.9}, oracle::random_floor_point(s, rng), 0.0, 0.05), s, {});
        worst = std::max(worst, gradcheck::max_relative_error(model.igatp_parameters(), [&] {
                             return nn::contrastive_loss(model.igatp_forward(f1), model.igatp_forward(f2), true, 15);
                         }));
    }
    return {worst < 1e-4, fmt("max relative error %.2e over 10 seeds", worst)};
}

Outcome loss_closed_forms() {
    Rng rng(505);
    double worst = 0.0;
    int clamped = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = 1 + static_cast<std::size_t>(t % 8);
        nn::Tensor a(1, d);
        nn::Tensor b(1, d);
        const double spread = t % 2 ? 3.0 : 0.8;
        for (double& v : a.data()) v = uniform(rng, -spread, spread);
        for (double& v : b.data()) v = uniform(rng, -spread, spread);
        double d2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
        const double same = nn::contrastive_loss(nn::constant(a), nn::constant(b), true, 15)->value[0];
        const double diff = nn::contrastive_loss(nn::constant(a), nn::constant(b), false, 15)->value[0];
        if (d2 >= 15) ++clamped;
        worst = std::max({worst, std::abs(same - d2), std::abs(diff - std::max(0.0, 15 - d2))});
    }
    return {worst <= 1e-9 && clamped > 0, fmt("max deviation %.1e, %.0f pairs in the clamp branch", worst, clamped)};
}

Outcome plausibility_law() {
    Rng rng(606);
    GroupModel model(FurnitureGroup::Sofa, ModelDims::reduced(), {}, 6);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const nn::Tensor y = random_tensor(1, model.dims().proj_out, rng);
        const nn::Tensor r = model.reconstruct(nn::constant(y))->value;
        double mse = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) mse += (y[i] - r[i]) * (y[i] - r[i]);
        mse /= static_cast<double>(y.size());
        worst = std::max(worst, std::abs(model.plausibility(y) - std::exp(-mse)));
    }
    // An autoencoder whose last layer is zero reproduces the zero vector exactly.
    for (const auto& p : model.ae_parameters()) p->value.fill(0.0);
    const double exact = model.plausibility(nn::Tensor(1, model.dims().proj_out, 0.0));
    return {worst <= 1e-12 && exact == 1.0, fmt("max |P - exp(-MSE)| %.1e, P at exact reconstruction %.17g", worst, exact)};
}

Outcome augmentation() {
    SyntheticParams sp;
    sp.rooms = 50;
    sp.seed = 707;
    const auto rooms = generate_rule_corpus(sp);
    AugmentParams p;
    p.seed = 77;
    const auto a = build_augmented_dataset(rooms, p);
    const auto b = build_augmented_dataset(rooms, p);
    bool identical = a.final_corpus().size() == b.final_corpus().size();
    for (std::size_t i = 0; identical && i < a.final_corpus().size(); ++i) {
        const auto& x = a.final_corpus()[i];
        const auto& y = b.final_corpus()[i];
        identical = x.id() == y.id() && x.objects().size() == y.objects().size() && x.walls().size() == y.walls().size();
        for (std::size_t k = 0; identical && k < x.objects().size(); ++k) identical = x.objects()[k].bbox == y.objects()[k].bbox;
        for (std::size_t k = 0; identical && k < x.walls().size(); ++k) {
            identical = x.walls()[k].segment.a == y.walls()[k].segment.a && x.walls()[k].segment.b == y.walls()[k].segment.b;
        }
    }
    std::size_t failing = 0;
    for (const auto& s : a.final_corpus()) {
        if (!check_overlaps(s, p) || !check_open_space(s, p) || s.objects().empty()) ++failing;
    }
    bool zero_identity = true;
    for (const auto& s : rooms) {
        const auto out = deform_room(s, std::vector<double>(s.walls().size(), 0.0), p.falloff_lambda);
        zero_identity = zero_identity && out.has_value();
        for (std::size_t k = 0; zero_identity && k < s.objects().size(); ++k) zero_identity = out->objects()[k].bbox == s.objects()[k].bbox;
        for (std::size_t k = 0; zero_identity && k < s.walls().size(); ++k) {
            zero_identity = out->walls()[k].segment.a == s.walls()[k].segment.a;
        }
    }
    AugmentParams single = p;
    single.removal = false;
    const auto one = build_augmented_dataset(std::span(rooms.data(), 1), single);
    const bool multiplier = one.parametric.size() == 20 && one.report[1].rooms == 20;
    const bool pass = identical && failing == 0 && zero_identity && multiplier;
    return {pass, fmt("deterministic %.0f, %.0f emitted rooms, %.0f failing checks, 1 room -> %.0f variants", identical,
                      static_cast<double>(a.final_corpus().size()), static_cast<double>(failing),
                      static_cast<double>(one.parametric.size())) +
                      (zero_identity ? ", zero offsets are the identity" : ", zero offsets moved something")};
}

// ---------------------------------------------------------------------------------------------------------

struct EndToEnd {
    EvalReport model;
    EvalReport baseline;
    double neg_mse = 0.0;
    double pos_mse = 0.0;
    long neg_n = 0;
    long pos_n = 0;
};

EndToEnd end_to_end() {
    const std::uint64_t seed = 7;
    SyntheticParams sp;
    sp.rooms = 120;
    sp.seed = seed;
    const auto rooms = generate_rule_corpus(sp);

    EvalOptions opt;
    opt.seed = seed;
    opt.grid = {0.1, 0};
    const auto partition = fold_partition(rooms.size(), opt);
    const std::vector<FurnitureGroup> groups{FurnitureGroup::Bed, FurnitureGroup::Table};
    const FeatureParams features;
    const ModelDims dims = ModelDims::reduced();

    TrainConfig tc;
    tc.epochs = 30;
    tc.l2_siamese = 0.0;
    AugmentParams ap;
    ap.variants_per_room = 3;
    ap.removal = false;

    EndToEnd out;
    std::mutex mu;
    const FoldTrainer trainer = [&](std::span<const Scene> train_rooms, FurnitureGroup g,
                                    int fold) -> std::shared_ptr<const PlacementScorer> {
        TrainConfig cfg = tc;
        cfg.seed = splitmix64(seed ^ static_cast<std::uint64_t>(fold + 1));
        AugmentParams aug = ap;
        aug.seed = cfg.seed;
        const auto pool = build_augmented_dataset(train_rooms, aug).final_corpus();
        auto model = std::make_shared<const GroupModel>(train_group(pool, g, dims, features, cfg).model);

        // Reconstruction error of held-out truths against random negatives in the same contexts.
        Rng rng = derive_rng(cfg.seed, "anomaly/" + std::string(group_name(g)));
        for (std::size_t i : partition[static_cast<std::size_t>(fold)].second) {
            for (const auto& o : rooms[i].objects()) {
                if (o.group != g) continue;
                auto context = std::make_shared<const Scene>(rooms[i].without_object(o.id));
                const double pos = model->reconstruction_error(model->project(o, *context));
                const Vec2 truth = o.centroid_xy();
                const auto neg = sample_negative(context, g, o.bbox.dims(), std::span(&truth, 1), model->support_height(),
                                                 features.support_tau, rng);
                const double negv = model->reconstruction_error(model->project(neg.object(), *context));
                std::lock_guard lock(mu);
                out.pos_mse += pos;
                out.neg_mse += negv;
                ++out.pos_n;
                ++out.neg_n;
            }
        }
        return std::make_shared<ModelScorer>(model);
    };
    out.model = removal_experiment(rooms, groups, trainer, opt);
    out.baseline = removal_experiment(
        rooms, groups,
        [&](std::span<const Scene>, FurnitureGroup, int fold) -> std::shared_ptr<const PlacementScorer> {
            return std::make_shared<UniformRandomScorer>(splitmix64(seed + static_cast<std::uint64_t>(fold)));
        },
        opt);
    out.pos_mse /= static_cast<double>(std::max(1L, out.pos_n));
    out.neg_mse /= static_cast<double>(std::max(1L, out.neg_n));
    return out;
}

Outcome reproduction(const EndToEnd& e) {
    bool pass = true;
    std::string detail;
    for (FurnitureGroup g : {FurnitureGroup::Bed, FurnitureGroup::Table}) {
        const GroupResult* m = e.model.find(g);
        const GroupResult* b = e.baseline.find(g);
        if (m == nullptr || b == nullptr) {
            pass = false;
            detail += std::string(group_name(g)) + " missing; ";
            continue;
        }
        const bool ok = m->top1 <= 0.5 * b->top1 && m->top5 <= m->top1;
        pass = pass && ok;
        detail += std::string(group_name(g)) + fmt(" T1 %.3f (baseline %.3f, ratio %.2f) T5 %.3f; ", m->top1, b->top1, m->top1 / b->top1, m->top5);
    }
    for (const auto& g : e.model.groups) pass = pass && g.top5 <= g.top1;
    return {pass, detail};
}

Outcome anomaly_gap(const EndToEnd& e) {
    const double ratio = e.neg_mse / e.pos_mse;
    return {ratio >= 1.5, fmt("negatives %.4g vs held-out positives %.4g (ratio %.2f, %.0f pairs)", e.neg_mse, e.pos_mse, ratio,
                              static_cast<double>(e.pos_n))};
}

Outcome ablation_scorers() {
    Rng rng(1010);
    // Siamese cluster mean: P = exp(-d).
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        std::vector<nn::Tensor> ys;
        for (int k = 0; k < 5; ++k) ys.push_back(random_tensor(1, 6, rng));
        const nn::Tensor mu = siamese_cluster_mean(ys);
        const nn::Tensor y = random_tensor(1, 6, rng);
        double d2 = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
            double m = 0.0;
            for (const auto& v : ys) m += v[i] / 5.0;
            d2 += (y[i] - m) * (y[i] - m);
        }
        worst = std::max(worst, std::abs(siamese_plausibility(y, mu) - std::exp(-std::sqrt(d2))));
    }
    // KDE: 1-D integral by the midpoint rule.
    std::vector<std::vector<double>> pts;
    std::normal_distribution<double> n(1.0, 2.0);
    for (int i = 0; i < 60; ++i) pts.push_back({n(rng)});
    const Kde kde = Kde::fit(pts);
    double integral = 0.0;
    const double step = 1e-3;
    for (double x = -25; x < 25; x += step) {
        const double q[1] = {x + step / 2};
        integral += kde.density(q) * step;
    }
    const bool pass = worst < 1e-12 && std::abs(integral - 1.0) < 1e-3;
    return {pass, fmt("max |P - exp(-d)| %.1e, KDE integral %.6f", worst, integral)};
}

Outcome serialization() {
    SyntheticParams sp;
    sp.rooms = 12;
    sp.seed = 1111;
    auto rooms = generate_rule_corpus(sp);
    // The rule corpus has no TV; one room gets one so that every group can be trained.
    {
        auto objs = rooms[0].objects();
        objs.push_back({"tv", FurnitureGroup::TV, BoundingBox3({1.0, 0.0, 0.5}, {2.0, 0.1, 1.1})});
        rooms[0] = rooms[0].with_objects(objs);
    }
    TrainConfig cfg;
    cfg.epochs = 2;
    cfg.batch_pairs = 16;
    cfg.seed = 11;
    TempDir dir("accept_bundle");
    Rng rng(1112);
    long probes = 0;
    long different = 0;
    int groups = 0;
    for (FurnitureGroup g : kAllGroups) {
        const bool present = std::any_of(rooms.begin(), rooms.end(), [g](const Scene& s) {
            return std::any_of(s.objects().begin(), s.objects().end(), [g](const auto& o) { return o.group == g; });
        });
        if (!present) continue;
        ++groups;
        const TrainResult r = train_group(rooms, g, ModelDims::reduced(), {}, cfg);
        save_bundle(r.model, dir.path(), {cfg.seed, dataset_fingerprint(rooms), cfg.to_json()});
        const GroupModel back = load_bundle(dir.path(), g);
        for (int k = 0; k < 100; ++k) {
            const Scene& s = rooms[static_cast<std::size_t>(k) % rooms.size()];
            const Vec2 c = oracle::random_floor_point(s, rng);
            const SceneObject cand = make_candidate(s, g, {0.6, 0.5, 0.7}, c, r.model.support_height(), 0.05);
            const double a = r.model.score(cand, s);
            const double b = back.score(cand, s);
            ++probes;
            if (std::memcmp(&a, &b, sizeof a) != 0) ++different;
        }
    }
    return {different == 0 && groups == kGroupCount,
            fmt("%.0f groups, %.0f probes, %.0f differ", groups, static_cast<double>(probes), static_cast<double>(different))};
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    int failures = 0;
    auto report = [&](int id, const char* name, double limit_s, const std::function<Outcome()>& run) {
        const auto t0 = clock::now();
        Outcome o = run();
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        if (limit_s > 0 && secs > limit_s) {
            o.pass = false;
            o.detail += fmt(" [over the %.0f s limit]", limit_s);
        }
        if (!o.pass) ++failures;
        std::printf("%s criterion %d (%s): %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    report(1, "geometric oracle equivalence", 10, geometric_oracle);
    report(2, "summary-vector contract", 5, summary_contract);
    report(3, "scene-graph contract", 10, graph_contract);
    report(4, "gradient suite", 60, gradient_suite);
    report(5, "loss closed forms", 0, loss_closed_forms);
    report(6, "plausibility law", 0, plausibility_law);
    report(7, "augmentation determinism and filters", 30, augmentation);

    const auto t0 = clock::now();
    const EndToEnd e = end_to_end();
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    report(8, "end-to-end synthetic reproduction", 0, [&] {
        Outcome o = reproduction(e);
        o.detail += fmt("pipeline %.0f s", secs);
        if (secs > 900) {
            o.pass = false;
            o.detail += " [over the 900 s limit]";
        }
        return o;
    });
    report(9, "anomaly gap", 0, [&] { return anomaly_gap(e); });
    report(10, "ablation scorers", 0, ablation_scorers);
    report(11, "serialization round trip", 0, serialization);

    std::printf("%d of 11 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
