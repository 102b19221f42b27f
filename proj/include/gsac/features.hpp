#pragma once

#include <array>
#include <span>
#include <vector>

#include "gsac/scene.hpp"

namespace gsac {

struct FeatureParams {
    /// rho = rho_fraction * room extent perpendicular to the wall.
    double rho_fraction = 0.20;
    /// Maximum vertical gap (meters) between a supported bottom and a supporting top.
    double support_tau = 0.05;
    /// Use a single rho = rho_fraction * min(length, width) for every wall.
    bool single_rho = false;

    void validate() const;
};

enum class RoomPosition { Middle, Edge, Corner };

// Block layout of the 48-D summary vector.
namespace summary {
inline constexpr std::size_t kThreeClosest = 0;  // 3
inline constexpr std::size_t kEdge = 3;          // 1
inline constexpr std::size_t kCorner = 4;        // 1
inline constexpr std::size_t kAvgDist = 5;       // 8
inline constexpr std::size_t kSurrounded = 13;   // 8
inline constexpr std::size_t kIntersect = 21;    // 9
inline constexpr std::size_t kSuppBy = 30;       // 9
inline constexpr std::size_t kSuppTo = 39;       // 9
inline constexpr std::size_t kSize = 48;
}  // namespace summary

using SummaryVector = std::array<double, summary::kSize>;
/// Per-group counts followed by a wall entry.
using GroupWallCounts = std::array<int, kGroupCount + 1>;

/// rho used for proximity to wall `w` in scene `s`.
double wall_rho(const Wall& w, const Scene& s, const FeatureParams& p);
/// phi: the object's footprint is closer than rho to the wall.
bool near_wall(const SceneObject& o, const Wall& w, const Scene& s, const FeatureParams& p);
/// Number of walls closer than rho.
int room_position(const SceneObject& o, const Scene& s, const FeatureParams& p);
RoomPosition classify_room_position(int near_walls);

/// Mean box distance to members of g other than o; 0 when there are none.
double avg_dist(const SceneObject& o, FurnitureGroup g, const Scene& s);
/// Length of the footprint diagonal, the proximity radius for surrounded_by.
double proximity_radius(const BoundingBox3& b);
/// sigma: other lies within o's proximity radius.
bool surrounds(const SceneObject& o, const SceneObject& other);
int surrounded_by(const SceneObject& o, FurnitureGroup g, const Scene& s);
GroupWallCounts intersect_xy_counts(const SceneObject& o, const Scene& s);
/// psi: +1 when `top_candidate` rests on `other`, -1 when `other` rests on it, else 0.
int support_sign(const SceneObject& top_candidate, const SceneObject& other, const FeatureParams& p);
GroupWallCounts supp_by_counts(const SceneObject& o, const Scene& s, const FeatureParams& p);
GroupWallCounts supp_to_counts(const SceneObject& o, const Scene& s, const FeatureParams& p);
/// Group codes (index + 1) of the three nearest other objects, 0-padded.
std::array<double, 3> three_closest(const SceneObject& o, const Scene& s);

/// Other objects of `s` (excluding o by id) sorted by box distance to o, ties by id.
std::vector<const SceneObject*> objects_by_distance(const SceneObject& o, const Scene& s);

SummaryVector summary_vector(const SceneObject& o, const Scene& s, const FeatureParams& p);

/// Per-dimension z-scoring fitted on a set of summary vectors.
class Standardizer {
public:
    static constexpr double kMinStd = 1e-8;

    Standardizer() = default;
    Standardizer(std::vector<double> mean, std::vector<double> stddev);

    /// Sample mean and (n-1) std per dimension; throws DataError for fewer than 2 rows.
    static Standardizer fit(std::span<const SummaryVector> rows);

    SummaryVector apply(const SummaryVector& v) const;
    bool fitted() const { return !mean_.empty(); }
    const std::vector<double>& mean() const { return mean_; }
    const std::vector<double>& stddev() const { return stddev_; }

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
};

}  // namespace gsac
