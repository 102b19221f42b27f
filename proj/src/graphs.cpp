#include "gsac/graphs.hpp"

#include <ostream>

namespace gsac {

namespace {

constexpr std::array<std::string_view, kRelationCount> kRelationNames{"IX", "SB", "SBY", "STO", "RP", "CO"};
constexpr std::string_view kDefaultId = "default";
constexpr std::string_view kFloorId = "floor";

SceneGraph start_graph(Relation r, const SceneObject& o) {
    SceneGraph g;
    g.relation = r;
    g.nodes.push_back({NodeKind::Target, o.id, object_node_feature(o.group, 0)});
    g.target_index = 0;
    return g;
}

void add_source(SceneGraph& g, GraphNode node) {
    g.nodes.push_back(std::move(node));
    g.edges.push_back({static_cast<int>(g.nodes.size()) - 1, g.target_index});
}

void finish_graph(SceneGraph& g) {
    if (g.edges.empty()) add_source(g, {NodeKind::Default, std::string(kDefaultId), default_node_feature()});
}

}  // namespace

std::string_view relation_name(Relation r) { return kRelationNames[static_cast<std::size_t>(r)]; }

bool SceneGraph::has_default() const {
    for (const auto& n : nodes) {
        if (n.kind == NodeKind::Default) return true;
    }
    return false;
}

DistanceOrdering distance_ordering(const SceneObject& o, const Scene& s) {
    DistanceOrdering ord;
    ord.object_rank.emplace(o.id, 0);
    int rank = 0;
    for (const SceneObject* other : objects_by_distance(o, s)) ord.object_rank.emplace(other->id, ++rank);
    ord.room_rank = rank + 1;
    return ord;
}

NodeFeature object_node_feature(FurnitureGroup g, int ordering) {
    NodeFeature f{};
    f[static_cast<std::size_t>(group_index(g))] = 1.0;
    f[kOrdering] = ordering;
    return f;
}

NodeFeature wall_node_feature(int ordering) {
    NodeFeature f{};
    f[kWallFlag] = 1.0;
    f[kOrdering] = ordering;
    return f;
}

NodeFeature floor_node_feature(int ordering) {
    NodeFeature f{};
    f[kFloorFlag] = 1.0;
    f[kOrdering] = ordering;
    return f;
}

NodeFeature default_node_feature() {
    NodeFeature f{};
    f[kOrdering] = -1.0;
    return f;
}

SceneGraphSet extract_graphs(const SceneObject& o, const Scene& s, const FeatureParams& p) {
    SceneGraphSet graphs;
    for (Relation r : kAllRelations) graphs[static_cast<std::size_t>(r)] = start_graph(r, o);
    auto& ix = graphs[static_cast<std::size_t>(Relation::IX)];
    auto& sb = graphs[static_cast<std::size_t>(Relation::SB)];
    auto& sby = graphs[static_cast<std::size_t>(Relation::SBY)];
    auto& sto = graphs[static_cast<std::size_t>(Relation::STO)];
    auto& rp = graphs[static_cast<std::size_t>(Relation::RP)];
    auto& co = graphs[static_cast<std::size_t>(Relation::CO)];

    const DistanceOrdering ord = distance_ordering(o, s);
    for (const auto& other : s.objects()) {
        if (other.id == o.id) continue;
        const GraphNode node{NodeKind::Object, other.id, object_node_feature(other.group, ord.object_rank.at(other.id))};
        if (bbox_xy_intersects(o.bbox, other.bbox)) add_source(ix, node);
        if (surrounds(o, other)) add_source(sb, node);
        const int psi = support_sign(o, other, p);
        if (psi == 1) add_source(sby, node);
        if (psi == -1) add_source(sto, node);
        add_source(co, node);
    }
    for (const auto& w : s.walls()) {
        if (near_wall(o, w, s, p)) add_source(rp, {NodeKind::Wall, w.id, wall_node_feature(ord.room_rank)});
    }
    if (rp.edges.empty()) add_source(rp, {NodeKind::Floor, std::string(kFloorId), floor_node_feature(ord.room_rank)});

    for (auto& g : graphs) finish_graph(g);
    return graphs;
}

void dump_graphs(std::ostream& os, const SceneGraphSet& graphs) {
    for (const auto& g : graphs) {
        for (const auto& e : g.edges) {
            os << relation_name(g.relation) << ' ' << g.nodes[static_cast<std::size_t>(e.source)].source_id << ' '
               << g.nodes[static_cast<std::size_t>(e.target)].source_id << '\n';
        }
    }
}

}  // namespace gsac
