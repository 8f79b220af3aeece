#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "horokit/cloud.hpp"
#include "horokit/hyp3.hpp"
#include "horokit/matching.hpp"

namespace horokit {

// User-supplied generating set, closed under inversion (inverses adjoined
// from the exact 2x2 adjugate) and deduplicated by value.
struct GeneratorSet {
    std::vector<SL2C> matrices;
    std::string source;
    double det_tolerance{kDetTolerance};
};

// Parses a generator file: one matrix per line, eight comma-separated decimal
// fields re(a),im(a),re(b),im(b),re(c),im(c),re(d),im(d); '#' starts a
// comment.  Throws ParseError (path:line) on syntax errors and
// std::invalid_argument naming the record when a determinant is out of
// tolerance.
GeneratorSet load_generators(const std::string& path, double det_tolerance = kDetTolerance);

// Group orbit of a basepoint, breadth-first over words in the generators,
// merged at a distance tolerance.  Index 0 is the basepoint; word_length[i]
// is the BFS depth at which point i was first kept.
struct OrbitCloud {
    PointCloud points;
    std::vector<std::int64_t> word_length;
    HPoint basepoint{0.0, 0.0, 1.0};
    double merge_tolerance{1e-6};
};

struct OrbitOptions {
    double merge_tolerance{1e-6};
    std::size_t point_budget{200'000};
};

// BFS orbit enumeration to word length L.  A candidate is kept iff its
// distance to every kept point exceeds merge_tolerance; candidates are
// generated in canonical order (frontier order, then generator order), so the
// result is deterministic.  Throws BudgetError when the kept set would exceed
// the point budget.
OrbitCloud enumerate_orbit(const GeneratorSet& gens, const HPoint& basepoint, std::int64_t L,
                           const OrbitOptions& opts = {});

// Orbit CSV: header "x,y,z,word_length", 17 significant digits.
void write_orbit_csv(const OrbitCloud& orbit, const std::string& path);

// Two-sided linear fit of distance against word length:
//   word_length / lambda - epsilon <= dist <= lambda * word_length + epsilon.
// epsilon is minimized over a fixed lambda grid in [1, 8]; ties prefer the
// smaller lambda.
struct QIFit {
    double lambda{1.0};
    double epsilon{0.0};
};

struct QIScatter {
    std::vector<std::pair<std::int64_t, double>> pairs;  // (word_length, dist to basepoint)
    QIFit fit_full;
    QIFit fit_half;         // fit over word_length <= max_word_length / 2
    bool qi_suspect{false}; // fit_full.lambda >= 1.25 * fit_half.lambda (needs depth >= 4)
};

QIScatter qi_scatter(const OrbitCloud& orbit);

// Horospherical band around the horosphere z = h0 (centered at infinity):
// membership iff |ln(z / h0)| <= epsilon.
struct HoroBand {
    double h0{1.0};
    double epsilon{0.0};
    HoroBand(double h0, double epsilon);
    bool contains(const HPoint& p) const;
};

std::vector<std::size_t> band_member_indices(const PointCloud& cloud, const HoroBand& band);
PointCloud horoband_intersect(const OrbitCloud& orbit, const HoroBand& band);

// Shortest-path metric of the proximity graph with edges between points at
// ambient distance <= edge_threshold (edge weight = that distance).
// Unreachable pairs are +infinity.
class GraphMetric {
  public:
    static GraphMetric build(const PointCloud& cloud, double edge_threshold,
                             std::size_t node_budget = 3000);

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return table_[i * n_ + j]; }
    std::uint64_t edge_count() const { return edges_; }
    double edge_threshold() const { return threshold_; }
    bool connected() const { return connected_; }
    static bool unreachable(double d);

  private:
    GraphMetric() = default;
    std::size_t n_{0};
    std::uint64_t edges_{0};
    double threshold_{0.0};
    bool connected_{true};
    std::vector<double> table_;
};

inline GraphMetric band_graph_metric(const PointCloud& cloud, double edge_threshold,
                                     std::size_t node_budget = 3000) {
    return GraphMetric::build(cloud, edge_threshold, node_budget);
}

// Compares a band cloud (graph metric) against a square reference grid
// (l1 metric scaled by the cloud's median nearest-neighbor distance):
// bottleneck bijection in horospherical plane coordinates, then Lipschitz
// constants of that pairing between the two metrics.
struct GridCompareOptions {
    std::size_t k{0};          // grid side; 0 = largest k with k^2 <= cloud size
    double plane_height{0.0};  // horosphere height for plane coords; 0 = median z
};

struct GridCompareReport {
    std::size_t k{0};
    std::size_t used_points{0};
    double plane_height{1.0};
    double unit{1.0};  // median nearest-neighbor ambient distance of the kept subcloud
    bool graph_connected{true};  // constants below are valid only when true
    double bottleneck_radius{0.0};
    double lip_forward{1.0}, lip_inverse{1.0};
    std::vector<std::size_t> kept;     // ascending indices into the input cloud
    std::vector<std::size_t> pairing;  // kept position -> grid index (row j * k + column i)
};

GridCompareReport grid_compare(const PointCloud& cloud, const GraphMetric& metric,
                               const GridCompareOptions& opts = {});

}  // namespace horokit
