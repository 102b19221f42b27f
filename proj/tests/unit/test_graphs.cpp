#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "gsac/graphs.hpp"
#include "../support/oracles.hpp"

using namespace gsac;

namespace {

BoundingBox3 box(double x0, double y0, double z0, double x1, double y1, double z1) {
    return BoundingBox3({x0, y0, z0}, {x1, y1, z1});
}

const SceneGraph& graph(const SceneGraphSet& g, Relation r) { return g[static_cast<std::size_t>(r)]; }

std::set<std::string> sources(const SceneGraph& g) {
    std::set<std::string> out;
    for (const auto& e : g.edges) out.insert(g.nodes[static_cast<std::size_t>(e.source)].source_id);
    return out;
}

}  // namespace

TEST_CASE("graphs of an object alone in the middle of a room") {
    const Scene room = make_rect_room("r", "", 10, 10);
    const SceneObject o{"t", FurnitureGroup::Bed, box(4.5, 4.5, 0, 5.5, 5.5, 1)};
    const auto g = extract_graphs(o, room, {});
    for (Relation r : {Relation::IX, Relation::SB, Relation::SBY, Relation::STO, Relation::CO}) {
        CHECK(graph(g, r).has_default());
        CHECK(graph(g, r).edges.size() == 1);
    }
    const auto& rp = graph(g, Relation::RP);
    CHECK_FALSE(rp.has_default());
    REQUIRE(rp.edges.size() == 1);
    CHECK(rp.nodes[1].kind == NodeKind::Floor);
    CHECK(rp.nodes[1].feature[kFloorFlag] == 1.0);
    CHECK(rp.nodes[1].feature[kOrdering] == 1.0);
}

TEST_CASE("graph edges point into the target and match features") {
    const FeatureParams p;
    Rng rng(5);
    for (int t = 0; t < 25; ++t) {
        const Scene s = oracle::random_scene(rng, 2 + t % 9);
        for (const auto& o : s.objects()) {
            const auto g = extract_graphs(o, s, p);
            for (const auto& sg : g) {
                CHECK(sg.target_index == 0);
                CHECK(sg.nodes[0].kind == NodeKind::Target);
                CHECK(sg.nodes[0].feature[kOrdering] == 0.0);
                CHECK_FALSE(sg.edges.empty());
                for (const auto& e : sg.edges) CHECK(e.target == sg.target_index);
                if (sg.has_default()) CHECK(sg.edges.size() == 1);
            }
            const auto ref = oracle::features(o, s, p.rho_fraction, p.support_tau);
            int ix = 0, sby = 0, sto = 0, sb = 0;
            for (int k = 0; k < 8; ++k) {
                ix += ref.ix[static_cast<std::size_t>(k)];
                sby += ref.sby[static_cast<std::size_t>(k)];
                sto += ref.sto[static_cast<std::size_t>(k)];
                sb += ref.surrounded[static_cast<std::size_t>(k)];
            }
            auto object_edges = [](const SceneGraph& sg) { return sg.has_default() ? 0 : static_cast<int>(sg.edges.size()); };
            CHECK(object_edges(graph(g, Relation::IX)) == ix);
            CHECK(object_edges(graph(g, Relation::SBY)) == sby);
            CHECK(object_edges(graph(g, Relation::STO)) == sto);
            CHECK(object_edges(graph(g, Relation::SB)) == sb);
            CHECK(object_edges(graph(g, Relation::CO)) == static_cast<int>(s.objects().size()) - 1);
            const auto& rp = graph(g, Relation::RP);
            if (ref.near == 0) {
                CHECK(rp.nodes.back().kind == NodeKind::Floor);
            } else {
                CHECK(static_cast<int>(rp.edges.size()) == ref.near);
            }
        }
    }
}

TEST_CASE("distance ordering ranks objects then room") {
    const Scene s = make_rect_room("r", "", 10, 10,
                                   {{"far", FurnitureGroup::Sofa, box(6, 0, 0, 7, 1, 1)},
                                    {"near", FurnitureGroup::Chair, box(2, 0, 0, 3, 1, 1)}});
    const SceneObject o{"t", FurnitureGroup::Table, box(0, 0, 0, 1, 1, 1)};
    const auto ord = distance_ordering(o, s);
    CHECK(ord.object_rank.at("t") == 0);
    CHECK(ord.object_rank.at("near") == 1);
    CHECK(ord.object_rank.at("far") == 2);
    CHECK(ord.room_rank == 3);
    const auto g = extract_graphs(o, s, {});
    const auto& co = graph(g, Relation::CO);
    CHECK(sources(co) == std::set<std::string>{"far", "near"});
    for (const auto& n : co.nodes) {
        if (n.source_id == "near") {
            CHECK(n.feature[static_cast<std::size_t>(group_index(FurnitureGroup::Chair))] == 1.0);
            CHECK(n.feature[kOrdering] == 1.0);
        }
    }
    const auto& rp = graph(g, Relation::RP);
    CHECK(sources(rp) == std::set<std::string>{"w0", "w3"});
    for (std::size_t i = 1; i < rp.nodes.size(); ++i) CHECK(rp.nodes[i].feature[kOrdering] == 3.0);
}

TEST_CASE("dump_graphs lists every edge") {
    const Scene s = make_rect_room("r", "", 4, 4, {{"c", FurnitureGroup::Chair, box(1, 0, 0, 1.5, 0.5, 1)}});
    const SceneObject o{"t", FurnitureGroup::Table, box(0, 0, 0, 1, 1, 0.7)};
    std::ostringstream os;
    dump_graphs(os, extract_graphs(o, s, {}));
    const std::string text = os.str();
    CHECK(text.find("IX c t\n") != std::string::npos);
    CHECK(text.find("CO c t\n") != std::string::npos);
    CHECK(text.find("SBY default t\n") != std::string::npos);
    CHECK(text.find("RP w0 t\n") != std::string::npos);
}
