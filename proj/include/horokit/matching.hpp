#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "horokit/cloud.hpp"

namespace horokit {

// Metric oracle between two index sets (left i, right j).
using CrossDist = std::function<double(std::size_t, std::size_t)>;

// Ambient distance between cloud points (the default oracle).
CrossDist ambient_cross(const PointCloud& left, const PointCloud& right);

// Bipartite displacement graph at threshold R: edge (i, j) iff
// cross(i, j) <= R.  Adjacency lists are ascending, so every algorithm
// downstream is deterministic.
struct DisplacementGraph {
    std::size_t n_left{0}, n_right{0};
    double threshold{0.0};
    std::vector<std::vector<std::size_t>> adj;

    static DisplacementGraph build(std::size_t n_left, std::size_t n_right,
                                   const CrossDist& cross, double threshold);
};

struct MatchingResult {
    std::vector<std::ptrdiff_t> left_to_right;  // -1 where unmatched
    std::vector<std::ptrdiff_t> right_to_left;
    std::size_t size{0};
};

// Maximum bipartite matching, Hopcroft-Karp, O(E sqrt(V)).  Deterministic:
// vertices and edges are always visited in ascending order.
MatchingResult max_matching(const DisplacementGraph& graph);

// If the graph has no left-saturating matching, a witness S (ascending left
// indices) with |N(S)| < |S|; nullopt otherwise.  Derived from the final
// alternating-path search of a maximum matching.
std::optional<std::vector<std::size_t>> hall_violator(const DisplacementGraph& graph);

struct LipschitzOptions {
    std::size_t exhaustive_cap = 5000;   // all pairs up to this cloud size
    std::size_t min_samples = 1'000'000; // sampled pairs above it
    std::uint64_t seed = 0;
};

struct LipschitzConstants {
    double forward{1.0};   // max over pairs of d_right(psi p, psi q) / d_left(p, q)
    double inverse{1.0};   // max over pairs of d_left(p, q) / d_right(psi p, psi q)
    std::uint64_t pairs{0};
    bool exhaustive{true};
};

LipschitzConstants lipschitz_constants(std::span<const std::size_t> pairing,
                                       const CrossDist& dist_left, const CrossDist& dist_right,
                                       const LipschitzOptions& opts = {});

struct BottleneckOptions {
    std::size_t dense_cap = 5000;           // dense N x N distance cache below this
    std::size_t distinct_budget = 50'000'000;  // cap on distinct candidate thresholds
    bool compute_lipschitz = true;          // fill forward/inverse with ambient metrics
    LipschitzOptions lipschitz;
};

struct BottleneckBijection {
    std::vector<std::size_t> pairing;  // left index -> right index (a permutation)
    double bottleneck{0.0};            // R*: max displacement, minimal over bijections
    double lip_forward{1.0};
    double lip_inverse{1.0};
    std::size_t thresholds_tried{0};   // matching probes during the binary search
};

// Minimal-bottleneck perfect matching between equal-cardinality clouds.
// Candidate thresholds are exactly the sorted, deduplicated multiset of all
// N^2 cross-distances; a binary search over them proves both feasibility at
// R* and infeasibility below it, so R* is always a realized pair distance.
BottleneckBijection bottleneck_bijection(const PointCloud& left, const PointCloud& right,
                                         const CrossDist* cross = nullptr,
                                         const BottleneckOptions& opts = {});

// Factorial-enumeration oracle for small instances (n <= 10).  Independent of
// the binary-search path; used for cross-checks and the CLI oracle mode.
std::pair<double, std::vector<std::size_t>> bottleneck_exhaustive(std::size_t n,
                                                                  const CrossDist& cross);

}  // namespace horokit
