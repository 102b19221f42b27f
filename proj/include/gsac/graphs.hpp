#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gsac/features.hpp"
#include "gsac/scene.hpp"

namespace gsac {

enum class Relation : int { IX = 0, SB, SBY, STO, RP, CO };
inline constexpr int kRelationCount = 6;
inline constexpr std::array<Relation, kRelationCount> kAllRelations{Relation::IX,  Relation::SB, Relation::SBY,
                                                                    Relation::STO, Relation::RP, Relation::CO};
std::string_view relation_name(Relation r);

// Node feature layout: 8 group one-hots, wall flag, floor flag, distance ordering.
inline constexpr std::size_t kNodeFeatureSize = 11;
inline constexpr std::size_t kWallFlag = 8;
inline constexpr std::size_t kFloorFlag = 9;
inline constexpr std::size_t kOrdering = 10;
using NodeFeature = std::array<double, kNodeFeatureSize>;

enum class NodeKind { Target, Object, Wall, Floor, Default };

struct GraphNode {
    NodeKind kind = NodeKind::Object;
    std::string source_id;
    NodeFeature feature{};
};

struct Edge {
    int source = 0;
    int target = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Directed homogeneous graph whose edges all point into the target node.
struct SceneGraph {
    Relation relation = Relation::IX;
    std::vector<GraphNode> nodes;
    std::vector<Edge> edges;
    int target_index = 0;

    bool has_default() const;
};

using SceneGraphSet = std::array<SceneGraph, kRelationCount>;

/// Distance ranks relative to a target: target 0, objects 1..n, room elements n+1.
struct DistanceOrdering {
    std::unordered_map<std::string, int> object_rank;
    int room_rank = 1;
};

DistanceOrdering distance_ordering(const SceneObject& o, const Scene& s);

NodeFeature object_node_feature(FurnitureGroup g, int ordering);
NodeFeature wall_node_feature(int ordering);
NodeFeature floor_node_feature(int ordering);
NodeFeature default_node_feature();

/// Builds all six relation graphs for `o` placed in `s` (o need not belong to s).
SceneGraphSet extract_graphs(const SceneObject& o, const Scene& s, const FeatureParams& p);

/// One line per edge: "<relation> <source id> <target id>".
void dump_graphs(std::ostream& os, const SceneGraphSet& graphs);

}  // namespace gsac
