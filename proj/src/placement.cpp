#include "gsac/placement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gsac/error.hpp"
#include "gsac/nn/serialize.hpp"
#include "gsac/parallel.hpp"

namespace gsac {

void GridOptions::validate() const {
    if (samples_per_side < 0) throw DataError("grid samples_per_side must be nonnegative");
    if (samples_per_side == 0 && !(cell_size > 0.0)) throw DataError("grid cell size must be positive");
}

std::size_t PlacementMap::masked_cells() const {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), std::uint8_t{1}));
}

PlacementMap make_grid(const Scene& scene, const GridOptions& grid) {
    grid.validate();
    const Rect2 b = scene.bounds();
    const double w = b.max.x - b.min.x;
    const double h = b.max.y - b.min.y;
    PlacementMap m;
    m.origin = b.min;
    if (grid.samples_per_side > 0) {
        m.nx = m.ny = grid.samples_per_side;
        m.cell_w = w / m.nx;
        m.cell_h = h / m.ny;
    } else {
        m.nx = std::max(1, static_cast<int>(std::ceil(w / grid.cell_size - 1e-9)));
        m.ny = std::max(1, static_cast<int>(std::ceil(h / grid.cell_size - 1e-9)));
        m.cell_w = m.cell_h = grid.cell_size;
    }
    const std::size_t cells = static_cast<std::size_t>(m.nx) * static_cast<std::size_t>(m.ny);
    m.probs.assign(cells, 0.0);
    m.mask.assign(cells, 0);
    for (int iy = 0; iy < m.ny; ++iy) {
        for (int ix = 0; ix < m.nx; ++ix) m.mask[m.index(ix, iy)] = scene.contains_xy(m.cell_center(ix, iy)) ? 1 : 0;
    }
    return m;
}

double ModelScorer::score(const Scene& scene, FurnitureGroup group, Vec3 dims, Vec2 center) const {
    if (group != model_->group()) throw ComputeError("model scorer asked to place a different group");
    const SceneObject cand =
        make_candidate(scene, group, dims, center, model_->support_height(), model_->feature_params().support_tau);
    return model_->score(cand, scene);
}

double UniformRandomScorer::score(const Scene& scene, FurnitureGroup group, Vec3, Vec2 center) const {
    const auto q = [](double v) { return static_cast<std::uint64_t>(std::llround(v * 1e6)); };
    std::uint64_t h = splitmix64(seed_ ^ fnv1a(scene.id()));
    h = splitmix64(h ^ static_cast<std::uint64_t>(group_index(group)));
    h = splitmix64(h ^ q(center.x));
    h = splitmix64(h ^ q(center.y));
    return static_cast<double>((h >> 11) + 1) * 0x1.0p-53;
}

PlacementMap probability_map(const PlacementScorer& scorer, const Scene& scene, FurnitureGroup group, Vec3 dims,
                             const GridOptions& grid) {
    PlacementMap m = make_grid(scene, grid);
    std::vector<std::size_t> cells;
    for (std::size_t i = 0; i < m.mask.size(); ++i) {
        if (m.mask[i]) cells.push_back(i);
    }
    parallel_for(cells.size(), [&](std::size_t k) {
        const std::size_t i = cells[k];
        const int ix = static_cast<int>(i % static_cast<std::size_t>(m.nx));
        const int iy = static_cast<int>(i / static_cast<std::size_t>(m.nx));
        m.probs[i] = scorer.score(scene, group, dims, m.cell_center(ix, iy));
    });
    return m;
}

PlacementMap probability_map(const GroupModel& model, const Scene& scene, Vec3 dims, const GridOptions& grid) {
    // Non-owning handle; the scorer does not outlive this call.
    const ModelScorer scorer(std::shared_ptr<const GroupModel>(&model, [](const GroupModel*) {}));
    return probability_map(scorer, scene, model.group(), dims, grid);
}

std::vector<Proposal> top_k(const PlacementMap& map, int k, double nms_radius) {
    if (k < 1) throw DataError("top_k needs k >= 1");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < map.mask.size(); ++i) {
        if (map.mask[i]) order.push_back(i);
    }
    if (order.empty()) throw DataError("top_k on a map with no in-floor cells");
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return map.probs[a] > map.probs[b]; });
    std::vector<Proposal> out;
    for (std::size_t i : order) {
        const Vec2 c = map.cell_center(static_cast<int>(i % static_cast<std::size_t>(map.nx)),
                                       static_cast<int>(i / static_cast<std::size_t>(map.nx)));
        const bool suppressed =
            std::any_of(out.begin(), out.end(), [&](const Proposal& p) { return norm(p.position - c) < nms_radius; });
        if (suppressed) continue;
        out.push_back({c, map.probs[i]});
        if (static_cast<int>(out.size()) == k) break;
    }
    return out;
}

double default_nms_radius(Vec3 dims) { return std::hypot(dims.x, dims.y) / 2; }

void write_heatmap_csv(const PlacementMap& map, const std::filesystem::path& path) {
    std::ostringstream os;
    os << "x,y,prob\n";
    char line[96];
    for (int iy = 0; iy < map.ny; ++iy) {
        for (int ix = 0; ix < map.nx; ++ix) {
            const std::size_t i = map.index(ix, iy);
            if (!map.mask[i]) continue;
            const Vec2 c = map.cell_center(ix, iy);
            std::snprintf(line, sizeof line, "%.4f,%.4f,%.9g\n", c.x, c.y, map.probs[i]);
            os << line;
        }
    }
    nn::write_file_atomic(path, os.str());
}

void write_heatmap_pgm(const PlacementMap& map, const std::filesystem::path& path) {
    std::string out = "P5\n" + std::to_string(map.nx) + " " + std::to_string(map.ny) + "\n65535\n";
    for (int iy = map.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < map.nx; ++ix) {
            const std::size_t i = map.index(ix, iy);
            const double p = map.mask[i] ? std::clamp(map.probs[i], 0.0, 1.0) : 0.0;
            const auto v = static_cast<std::uint16_t>(std::lround(p * 65535.0));
            out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xff));
        }
    }
    nn::write_file_atomic(path, out);
}

const GroupResult* EvalReport::find(FurnitureGroup g) const {
    const auto it = std::find_if(groups.begin(), groups.end(), [g](const GroupResult& r) { return r.group == g; });
    return it == groups.end() ? nullptr : &*it;
}

double EvalReport::overall_top1() const {
    double s = 0.0;
    int n = 0;
    for (const auto& g : groups) {
        s += g.top1 * g.count;
        n += g.count;
    }
    return n > 0 ? s / n : 0.0;
}

double EvalReport::overall_top5() const {
    double s = 0.0;
    int n = 0;
    for (const auto& g : groups) {
        s += g.top5 * g.count;
        n += g.count;
    }
    return n > 0 ? s / n : 0.0;
}

void EvalOptions::validate() const {
    grid.validate();
    if (folds < 1) throw DataError("evaluation needs at least one fold");
    if (!(train_split > 0.0 && train_split < 1.0)) throw DataError("train split must lie strictly between 0 and 1");
    const int chunks = static_cast<int>(std::lround(1.0 / (1.0 - train_split)));
    if (folds > chunks) {
        throw DataError(std::to_string(folds) + " folds with disjoint validation sets need a validation share of at most 1/" +
                        std::to_string(folds));
    }
    if (k < 1) throw DataError("evaluation k must be >= 1");
}

std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> fold_partition(std::size_t rooms,
                                                                                         const EvalOptions& opt) {
    opt.validate();
    if (rooms < static_cast<std::size_t>(opt.folds)) {
        throw DataError("evaluation needs at least " + std::to_string(opt.folds) + " rooms (one per fold), got " +
                        std::to_string(rooms));
    }
    std::vector<std::size_t> order(rooms);
    std::iota(order.begin(), order.end(), 0);
    Rng rng = derive_rng(opt.seed, "folds");
    std::shuffle(order.begin(), order.end(), rng);
    const auto chunks = static_cast<std::size_t>(std::lround(1.0 / (1.0 - opt.train_split)));
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> out;
    for (std::size_t f = 0; f < static_cast<std::size_t>(opt.folds); ++f) {
        const std::size_t lo = f * rooms / chunks;
        const std::size_t hi = (f + 1) * rooms / chunks;
        std::vector<std::size_t> train;
        std::vector<std::size_t> val;
        for (std::size_t i = 0; i < rooms; ++i) (i >= lo && i < hi ? val : train).push_back(order[i]);
        std::sort(train.begin(), train.end());
        std::sort(val.begin(), val.end());
        out.emplace_back(std::move(train), std::move(val));
    }
    return out;
}

EvalReport removal_experiment(std::span<const Scene> rooms, std::span<const FurnitureGroup> groups,
                              const FoldTrainer& train, const EvalOptions& opt) {
    const auto partition = fold_partition(rooms.size(), opt);
    EvalReport report;
    for (FurnitureGroup g : groups) {
        const std::string gname(group_name(g));
        const auto has_group = [g](const Scene& s) {
            return std::any_of(s.objects().begin(), s.objects().end(), [g](const auto& o) { return o.group == g; });
        };
        const auto with_group = std::count_if(rooms.begin(), rooms.end(), has_group);
        if (with_group < opt.folds) {
            report.warnings.push_back(gname + ": only " + std::to_string(with_group) + " rooms contain the group (need " +
                                      std::to_string(opt.folds) + "); skipped");
            continue;
        }
        GroupResult gr{g, 0.0, 0.0, 0, {}};
        for (int f = 0; f < opt.folds; ++f) {
            const auto& [train_idx, val_idx] = partition[static_cast<std::size_t>(f)];
            std::vector<Scene> train_rooms;
            for (std::size_t i : train_idx) train_rooms.push_back(rooms[i]);
            FoldResult fr{f, 0.0, 0.0, 0};
            const bool val_has = std::any_of(val_idx.begin(), val_idx.end(), [&](std::size_t i) { return has_group(rooms[i]); });
            const bool train_has = std::any_of(train_rooms.begin(), train_rooms.end(), has_group);
            if (!val_has || !train_has) {
                report.warnings.push_back(gname + ": fold " + std::to_string(f) + " has no " +
                                          (val_has ? "training" : "validation") + " instances; fold skipped");
                gr.folds.push_back(fr);
                continue;
            }
            const auto scorer = train(train_rooms, g, f);
            for (std::size_t i : val_idx) {
                const Scene& room = rooms[i];
                for (const auto& o : room.objects()) {
                    if (o.group != g) continue;
                    const Scene context = room.without_object(o.id);
                    const Vec3 dims = o.bbox.dims();
                    const PlacementMap map = probability_map(*scorer, context, g, dims, opt.grid);
                    const double radius = opt.nms_radius > 0.0 ? opt.nms_radius : default_nms_radius(dims);
                    const auto props = top_k(map, opt.k, radius);
                    const Vec2 truth = o.centroid_xy();
                    double best = norm(props.front().position - truth);
                    const double first = best;
                    for (const auto& p : props) best = std::min(best, norm(p.position - truth));
                    fr.top1 += first;
                    fr.top5 += best;
                    ++fr.count;
                }
            }
            gr.top1 += fr.top1;
            gr.top5 += fr.top5;
            gr.count += fr.count;
            if (fr.count > 0) {
                fr.top1 /= fr.count;
                fr.top5 /= fr.count;
            }
            gr.folds.push_back(fr);
        }
        if (gr.count == 0) {
            report.warnings.push_back(gname + ": no validation instances in any fold; skipped");
            continue;
        }
        gr.top1 /= gr.count;
        gr.top5 /= gr.count;
        report.groups.push_back(std::move(gr));
    }
    return report;
}

void write_report_text(std::ostream& os, const EvalReport& r) {
    char line[128];
    std::snprintf(line, sizeof line, "%-10s %8s %8s %6s\n", "Group", "T1 (m)", "T5 (m)", "N");
    os << line;
    for (const auto& g : r.groups) {
        std::snprintf(line, sizeof line, "%-10s %8.3f %8.3f %6d\n", std::string(group_name(g.group)).c_str(), g.top1,
                      g.top5, g.count);
        os << line;
    }
    int n = 0;
    for (const auto& g : r.groups) n += g.count;
    std::snprintf(line, sizeof line, "%-10s %8.3f %8.3f %6d\n", "Overall", r.overall_top1(), r.overall_top5(), n);
    os << line;
    for (const auto& g : r.groups) {
        os << "\n" << group_name(g.group) << " per fold\n";
        for (const auto& f : g.folds) {
            std::snprintf(line, sizeof line, "  fold %d  T1 %.3f  T5 %.3f  N %d\n", f.fold, f.top1, f.top5, f.count);
            os << line;
        }
    }
    for (const auto& w : r.warnings) os << "warning: " << w << "\n";
}

std::string report_json(const EvalReport& r) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : r.groups) {
        nlohmann::json folds = nlohmann::json::array();
        for (const auto& f : g.folds) folds.push_back({{"fold", f.fold}, {"top1", f.top1}, {"top5", f.top5}, {"count", f.count}});
        groups.push_back({{"group", std::string(group_name(g.group))},
                          {"top1", g.top1},
                          {"top5", g.top5},
                          {"count", g.count},
                          {"folds", folds}});
    }
    const nlohmann::json j{{"groups", groups},
                           {"overall", {{"top1", r.overall_top1()}, {"top5", r.overall_top5()}}},
                           {"warnings", r.warnings}};
    return j.dump(2) + "\n";
}

}  // namespace gsac
