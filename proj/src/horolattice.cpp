#include "horokit/horolattice.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "horokit/errors.hpp"

namespace horokit {

HPoint embed(const LatticeCoord& x, std::int64_t max_level) {
    if (max_level < 0) throw std::invalid_argument("embed: max_level must be non-negative");
    if (x.c < -max_level || x.c > max_level)
        throw std::invalid_argument("embed: level " + std::to_string(x.c) +
                                    " outside representable bound " + std::to_string(max_level));
    const int c = static_cast<int>(x.c);
    return HPoint(std::ldexp(static_cast<double>(x.a), c), std::ldexp(static_cast<double>(x.b), c),
                  std::ldexp(1.0, c));
}

LatticeCoord act(const GridVector& v, const LatticeCoord& x) {
    std::int64_t a2 = 0, b2 = 0;
    if (__builtin_add_overflow(x.a, v.m, &a2) || __builtin_add_overflow(x.b, v.n, &b2))
        throw std::overflow_error("act: horizontal index overflow");
    return LatticeCoord{a2, b2, x.c};
}

double displacement(const GridVector& v) {
    const double m = static_cast<double>(v.m);
    const double n = static_cast<double>(v.n);
    return acosh1p((m * m + n * n) / 2.0);
}

LatticeWindow::LatticeWindow(std::int64_t A, std::int64_t C, std::size_t point_budget)
    : A_(A), C_(C) {
    if (A < 1) throw std::invalid_argument("LatticeWindow: A must be >= 1");
    if (C < 0) throw std::invalid_argument("LatticeWindow: C must be >= 0");
    if (C > kDefaultMaxLevel)
        throw std::invalid_argument("LatticeWindow: C exceeds representable level bound");
    if (A > 100'000'000) throw BudgetError("LatticeWindow: A out of range");
    // side <= 2e8+1, levels <= 81, so total stays well inside 64 bits.
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(A) + 1;
    const std::uint64_t levels = 2 * static_cast<std::uint64_t>(C) + 1;
    const std::uint64_t total = side * side * levels;
    if (total > point_budget)
        throw BudgetError("LatticeWindow: " + std::to_string(total) +
                          " points exceed budget of " + std::to_string(point_budget));
    points_.reserve(total);
    for (std::int64_t c = -C; c <= C; ++c)
        for (std::int64_t b = -A; b <= A; ++b)
            for (std::int64_t a = -A; a <= A; ++a) points_.push_back(LatticeCoord{a, b, c});
}

std::optional<std::size_t> LatticeWindow::index_of(const LatticeCoord& x) const {
    if (x.a < -A_ || x.a > A_ || x.b < -A_ || x.b > A_ || x.c < -C_ || x.c > C_)
        return std::nullopt;
    const std::size_t side = static_cast<std::size_t>(2 * A_ + 1);
    return (static_cast<std::size_t>(x.c + C_) * side + static_cast<std::size_t>(x.b + A_)) * side +
           static_cast<std::size_t>(x.a + A_);
}

PointCloud LatticeWindow::to_cloud() const {
    std::vector<HPoint> pts;
    pts.reserve(points_.size());
    for (const LatticeCoord& x : points_) pts.push_back(embed(x));
    return PointCloud("dyadic-window-A" + std::to_string(A_) + "-C" + std::to_string(C_),
                      std::move(pts));
}

LatticeFreenessCertificate verify_action_free(const LatticeWindow& window, std::int64_t K) {
    if (K < 1) throw std::invalid_argument("verify_action_free: K must be >= 1");
    LatticeFreenessCertificate cert;
    cert.k = K;
    for (std::int64_t m = -K; m <= K; ++m) {
        for (std::int64_t n = -K; n <= K; ++n) {
            if (m == 0 && n == 0) continue;
            const GridVector v{m, n};
            for (const LatticeCoord& x : window.points()) {
                ++cert.pairs_checked;
                if (act(v, x) == x) cert.violations.push_back({v, x});
            }
        }
    }
    cert.pass = cert.violations.empty();
    return cert;
}

}  // namespace horokit
