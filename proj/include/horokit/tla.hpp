#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "horokit/cloud.hpp"
#include "horokit/horolattice.hpp"

namespace horokit {

// A Z^2 action on a finite carrier, given by two commuting injective partial
// self-maps of the carrier indices (value -1 where the image would leave the
// carrier).  Partial inverses are derived at construction.
class FiniteAction {
  public:
    static constexpr std::ptrdiff_t kUndef = -1;

    // Validates: map sizes match the carrier, entries are -1 or valid indices,
    // each map is injective on its domain, and e1/e2 commute wherever both
    // composites are defined.  Throws std::invalid_argument otherwise.
    FiniteAction(PointCloud carrier, std::vector<std::ptrdiff_t> e1,
                 std::vector<std::ptrdiff_t> e2);

    const PointCloud& carrier() const { return carrier_; }
    std::size_t size() const { return carrier_.size(); }

    // Forward generator maps and their partial inverses.
    const std::vector<std::ptrdiff_t>& e1() const { return e1_; }
    const std::vector<std::ptrdiff_t>& e2() const { return e2_; }
    const std::vector<std::ptrdiff_t>& e1_inv() const { return e1_inv_; }
    const std::vector<std::ptrdiff_t>& e2_inv() const { return e2_inv_; }

    // Fraction of carrier points where each generator is defined.
    double coverage_e1() const;
    double coverage_e2() const;

    // Applies the word e1^m e2^n starting at carrier index i; kUndef if any
    // step leaves the carrier.
    std::ptrdiff_t apply_word(std::size_t i, std::int64_t m, std::int64_t n) const;

  private:
    PointCloud carrier_;
    std::vector<std::ptrdiff_t> e1_, e2_;
    std::vector<std::ptrdiff_t> e1_inv_, e2_inv_;
};

// The grid action restricted to a dyadic window: e1 shifts a by 1, e2 shifts
// b by 1, defined where the shifted coordinate stays inside the window.
FiniteAction make_dyadic_action(const LatticeWindow& window);

// A fixed point of a nonzero word: apply_word(point, m, n) == point.
struct FreenessViolation {
    std::int64_t m{0}, n{0};
    std::size_t point{0};
    friend bool operator==(const FreenessViolation&, const FreenessViolation&) = default;
};

// Per-word displacement summary over the carrier points where the word is
// defined.
struct WordDisplacement {
    std::int64_t m{0}, n{0};
    std::uint64_t defined{0};        // carrier points where the word is defined
    double max_displacement{0.0};    // meaningful only when defined > 0
    double min_displacement{0.0};    // fixed points count as displacement 0
};

struct TLACertificate {
    bool pass{true};
    std::int64_t k{0};
    std::string carrier_label;
    double coverage_e1{0.0}, coverage_e2{0.0};
    std::optional<double> displacement_bound;  // pass requires max <= bound when set
    std::uint64_t violation_count{0};
    std::vector<FreenessViolation> violations;  // first kMaxRecordedViolations only
    std::vector<WordDisplacement> words;        // nonzero (m,n), |m|,|n| <= k, (m,n) ascending

    static constexpr std::size_t kMaxRecordedViolations = 100;

    nlohmann::ordered_json to_json() const;
};

// Checks every nonzero word (m, n) with |m|,|n| <= K on every carrier point
// where it is defined: records fixed points and the maximum displacement per
// word.  Passes iff there are no fixed points and, when displacement_bound is
// given, every word's max displacement is <= the bound.
TLACertificate verify_translation_like(const FiniteAction& action, std::int64_t K,
                                       std::optional<double> displacement_bound = std::nullopt);

// Transports an action through a bijection onto a target cloud of equal
// cardinality: the new generator maps are pairing . g . pairing^-1, with
// domains the image of the source domains.  Throws on size mismatch or a
// non-bijective pairing.
FiniteAction conjugate_action(const FiniteAction& source, std::span<const std::size_t> pairing,
                              PointCloud target);

// Pointwise displacement-transport inequality for every nonzero word h with
// exponents bounded by K:
//   d(y, h.y) <= lip_forward * d(x, h.x) + slack,   y = pairing[x],
// checked wherever the word is defined on the source side.  Holds by
// construction when lip_forward was measured over all pairs of the same
// pairing; the slack absorbs rounding.
struct ConjugationBoundReport {
    bool pass{true};
    double max_excess{0.0};  // max of d(y,h.y) - lip_forward * d(x,h.x)
    double max_ratio{0.0};   // max of d(y,h.y) / d(x,h.x)
    std::uint64_t pairs_checked{0};
};

ConjugationBoundReport verify_conjugation_bound(const FiniteAction& source,
                                                const FiniteAction& conjugated,
                                                std::span<const std::size_t> pairing,
                                                double lip_forward, std::int64_t K = 1,
                                                double slack = 1e-12);

// Connected component of the carrier under both generator maps and their
// inverses.  Each member carries grid offsets relative to the component root
// (accumulated word exponents along the BFS tree); for a free action these
// give an embedding of the component into the grid.
struct OrbitComponent {
    std::vector<std::size_t> members;  // ascending carrier indices
    std::int64_t extent_e1{1};         // bounding-box width in e1 offsets (points)
    std::int64_t extent_e2{1};         // bounding-box width in e2 offsets (points)
    bool grid_consistent{true};        // no point was reached with two different offsets
};

struct OrbitPartition {
    std::vector<OrbitComponent> components;  // ordered by smallest member
    std::size_t component_count() const { return components.size(); }
};

OrbitPartition orbit_partition(const FiniteAction& action);

}  // namespace horokit
