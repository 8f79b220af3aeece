#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "horokit/cloud.hpp"
#include "horokit/hyp3.hpp"

namespace horokit {

// Integer coordinates (a, b, c) of the dyadic lattice point
// (2^c a, 2^c b, 2^c): horizontal indices a, b at vertical level c.
struct LatticeCoord {
    std::int64_t a{0}, b{0}, c{0};
    friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
};

// Element (m, n) of the Z^2 grid acting on horizontal indices.
struct GridVector {
    std::int64_t m{0}, n{0};
    friend bool operator==(const GridVector&, const GridVector&) = default;
};

inline constexpr std::int64_t kDefaultMaxLevel = 40;

// (a, b, c) -> (2^c a, 2^c b, 2^c).  Exact binary scaling via ldexp; |c| must
// stay within max_level so the image is exactly representable.
HPoint embed(const LatticeCoord& x, std::int64_t max_level = kDefaultMaxLevel);

// (m, n) . (a, b, c) = (a + m, b + n, c).  Overflow-checked.
LatticeCoord act(const GridVector& v, const LatticeCoord& x);

// Displacement of (m, n) at any lattice point: arccosh(1 + (m^2 + n^2)/2).
// Independent of the point acted on (the action shifts within one horosphere
// slice, and heights cancel).
double displacement(const GridVector& v);

// Finite window |a|,|b| <= A, |c| <= C of the lattice.  Points are ordered
// level-major: c ascending, then b, then a, so that indices can be computed
// arithmetically and window clouds come out in a canonical order.
class LatticeWindow {
  public:
    LatticeWindow(std::int64_t A, std::int64_t C, std::size_t point_budget = 1'000'000);

    std::int64_t horizontal_bound() const { return A_; }
    std::int64_t level_bound() const { return C_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<LatticeCoord>& points() const { return points_; }
    const LatticeCoord& operator[](std::size_t i) const { return points_[i]; }

    // O(1) index of a coordinate, or nullopt if outside the window.
    std::optional<std::size_t> index_of(const LatticeCoord& x) const;

    // Embedded copy; label records the window parameters.
    PointCloud to_cloud() const;

  private:
    std::int64_t A_, C_;
    std::vector<LatticeCoord> points_;
};

struct FreenessViolationCoord {
    GridVector v;
    LatticeCoord x;
};

struct LatticeFreenessCertificate {
    bool pass{true};
    std::int64_t k{0};
    std::uint64_t pairs_checked{0};
    std::vector<FreenessViolationCoord> violations;
};

// Exhaustive freeness check of the grid action on the window: no nonzero
// (m, n) with |m|,|n| <= K fixes any window point.
LatticeFreenessCertificate verify_action_free(const LatticeWindow& window, std::int64_t K);

}  // namespace horokit
