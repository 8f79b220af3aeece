#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "horokit/cloud.hpp"

namespace horokit {

struct MinDistanceResult {
    double value{0.0};
    std::size_t i{0}, j{0};  // witness pair, i < j, lexicographically first among minima
};

// Exact minimum over all pairs.  Internally compares the monotone surrogate
// u = |p-q|^2 / (2 p.z q.z) and converts once at the end, which is the same
// ordering as comparing distances pair by pair.
MinDistanceResult min_pairwise_distance(const PointCloud& cloud);

// Ball-census centers: every point, or a seeded sample of k distinct points.
struct CenterStrategy {
    enum class Kind { All, Sample };
    Kind kind{Kind::All};
    std::size_t k{0};
    std::uint64_t seed{0};

    static CenterStrategy all() { return {}; }
    static CenterStrategy sample(std::size_t k, std::uint64_t seed) {
        return {Kind::Sample, k, seed};
    }
};

// N_r = max over chosen centers of #{q : dist(center, q) <= r}.
struct GrowthProfile {
    std::vector<double> radii;         // ascending
    std::vector<std::int64_t> counts;  // same length, nondecreasing
    std::int64_t centers_used{0};
};

GrowthProfile ball_profile(const PointCloud& cloud, std::vector<double> radii,
                           const CenterStrategy& centers);

void write_profile_csv(const GrowthProfile& profile, const std::string& path);

// Least-squares slope of ln N_r against r over radii in [r_lo, r_hi] whose
// count is >= 2 (a count of 0/1 carries no growth information).  Requires at
// least three such radii.
double growth_slope(const GrowthProfile& profile, double r_lo, double r_hi);

// Sampling regions for covering_radius.  Sampling is uniform in (x, y, ln z);
// the scaled region draws x, y uniformly in the height-proportional box
// |x|,|y| <= half_width_per_z * z, which tracks the lattice's natural aspect.
struct BoxRegion {
    double x_bound, y_bound, z_lo, z_hi;
};
struct ScaledRegion {
    double half_width_per_z, z_lo, z_hi;
};
using Region = std::variant<BoxRegion, ScaledRegion>;

// Interior of a (A, C) window with the given safety margin (in lattice
// steps/levels): z within [2^(margin-C), 2^(C-margin)] and |x|,|y| <=
// (A-margin) z / 4.  Samples drawn here keep at least `margin` grid steps to
// the window rim at every level that matters for their nearest neighbor.
ScaledRegion interior_region(std::int64_t A, std::int64_t C, std::int64_t margin = 2);

struct CoveringResult {
    double radius{0.0};    // max over samples of distance to nearest cloud point
    HPoint worst;          // the sample realizing it (first such, in sample order)
    std::int64_t samples{0};
};

// Seeded Monte Carlo covering radius of the cloud over the region.  The
// nearest-neighbor search is an exact pruned scan (points sorted by height,
// expanding from the sample's height until the vertical lower bound exceeds
// the best distance found), so each sample's value equals the brute-force
// minimum.
CoveringResult covering_radius(const PointCloud& cloud, const Region& region,
                               std::int64_t n_samples, std::uint64_t seed);

}  // namespace horokit
