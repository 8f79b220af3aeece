#include "horokit/udbg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "horokit/parallel.hpp"
#include "horokit/report.hpp"
#include "horokit/rng.hpp"

namespace horokit {

namespace {

// Monotone surrogate for dist: u(p, q) = |p-q|^2 / (2 p.z q.z).
// acosh1p(u) is nondecreasing in u, so comparisons can stay in u-space.
inline double usq(const HPoint& p, const HPoint& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    return (dx * dx + dy * dy + dz * dz) / (2.0 * p.z * q.z);
}

struct BestPair {
    double u{std::numeric_limits<double>::infinity()};
    std::size_t i{0}, j{0};
};

}  // namespace

MinDistanceResult min_pairwise_distance(const PointCloud& cloud) {
    const std::size_t n = cloud.size();
    if (n < 2) throw std::invalid_argument("min_pairwise_distance: need at least two points");
    const auto& pts = cloud.points();

    auto scan_rows = [&](std::size_t row_begin, std::size_t row_end) {
        BestPair best;
        for (std::size_t i = row_begin; i < row_end; ++i) {
            const HPoint& p = pts[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                const double u = usq(p, pts[j]);
                if (u < best.u) best = {u, i, j};
            }
        }
        return best;
    };
    // Strict < above plus in-order chunk combination keeps the first
    // lexicographic (i, j) among ties.
    BestPair best = chunked_reduce(
        n, 64, BestPair{}, scan_rows,
        [](BestPair acc, const BestPair& b) { return b.u < acc.u ? b : acc; });
    return {acosh1p(best.u), best.i, best.j};
}

GrowthProfile ball_profile(const PointCloud& cloud, std::vector<double> radii,
                           const CenterStrategy& centers) {
    if (cloud.empty()) throw std::invalid_argument("ball_profile: empty cloud");
    if (radii.empty()) throw std::invalid_argument("ball_profile: no radii");
    std::sort(radii.begin(), radii.end());
    if (radii.front() < 0.0) throw std::invalid_argument("ball_profile: negative radius");

    const std::size_t n = cloud.size();
    std::vector<std::size_t> center_idx;
    if (centers.kind == CenterStrategy::Kind::All) {
        center_idx.resize(n);
        std::iota(center_idx.begin(), center_idx.end(), std::size_t{0});
    } else {
        if (centers.k == 0 || centers.k > n)
            throw std::invalid_argument("ball_profile: sample count out of range");
        std::vector<std::size_t> pool(n);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        SplitMix64 rng = child_rng(centers.seed, "ball-profile-centers");
        for (std::size_t i = 0; i < centers.k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
            std::swap(pool[i], pool[j]);
        }
        center_idx.assign(pool.begin(), pool.begin() + centers.k);
        std::sort(center_idx.begin(), center_idx.end());
    }

    // Count in u-space: dist <= r  <=>  u <= cosh(r) - 1.
    const std::size_t nr = radii.size();
    std::vector<double> uth(nr);
    for (std::size_t r = 0; r < nr; ++r) uth[r] = std::cosh(radii[r]) - 1.0;

    const auto& pts = cloud.points();
    using Counts = std::vector<std::int64_t>;
    auto scan_centers = [&](std::size_t begin, std::size_t end) {
        Counts maxima(nr, 0);
        Counts bucket(nr, 0);
        for (std::size_t ci = begin; ci < end; ++ci) {
            const HPoint& center = pts[center_idx[ci]];
            std::fill(bucket.begin(), bucket.end(), 0);
            for (std::size_t q = 0; q < n; ++q) {
                const double u = usq(center, pts[q]);
                if (u > uth[nr - 1]) continue;
                // First radius whose threshold admits u; nr is small, scan.
                std::size_t r = 0;
                while (uth[r] < u) ++r;
                ++bucket[r];
            }
            std::int64_t acc = 0;
            for (std::size_t r = 0; r < nr; ++r) {
                acc += bucket[r];
                if (acc > maxima[r]) maxima[r] = acc;
            }
        }
        return maxima;
    };
    Counts counts = chunked_reduce(center_idx.size(), 16, Counts(nr, 0), scan_centers,
                                   [&](Counts acc, const Counts& chunk) {
                                       for (std::size_t r = 0; r < nr; ++r)
                                           acc[r] = std::max(acc[r], chunk[r]);
                                       return acc;
                                   });

    GrowthProfile profile;
    profile.radii = std::move(radii);
    profile.counts = std::move(counts);
    profile.centers_used = static_cast<std::int64_t>(center_idx.size());
    return profile;
}

void write_profile_csv(const GrowthProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "r,N_r\n";
    for (std::size_t i = 0; i < profile.radii.size(); ++i)
        out << format_double17(profile.radii[i]) << ',' << profile.counts[i] << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

double growth_slope(const GrowthProfile& profile, double r_lo, double r_hi) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < profile.radii.size(); ++i) {
        const double r = profile.radii[i];
        if (r < r_lo || r > r_hi) continue;
        if (profile.counts[i] < 2) continue;
        xs.push_back(r);
        ys.push_back(std::log(static_cast<double>(profile.counts[i])));
    }
    if (xs.size() < 3)
        throw std::invalid_argument(
            "growth_slope: need at least 3 radii in range with counts >= 2");
    const double xbar = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
    const double ybar = std::accumulate(ys.begin(), ys.end(), 0.0) / double(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
    }
    if (sxx == 0.0) throw std::invalid_argument("growth_slope: degenerate radius range");
    return sxy / sxx;
}

ScaledRegion interior_region(std::int64_t A, std::int64_t C, std::int64_t margin) {
    if (margin < 1) throw std::invalid_argument("interior_region: margin must be >= 1");
    if (A <= margin || C < margin)
        throw std::invalid_argument("interior_region: window too small for margin");
    const double hw = static_cast<double>(A - margin) / 4.0;
    return ScaledRegion{hw, std::ldexp(1.0, static_cast<int>(margin - C)),
                        std::ldexp(1.0, static_cast<int>(C - margin))};
}

namespace {

struct RegionSampler {
    const Region& region;

    HPoint draw(SplitMix64& rng) const {
        if (const auto* box = std::get_if<BoxRegion>(&region)) {
            const double z = std::exp(rng.uniform(std::log(box->z_lo), std::log(box->z_hi)));
            const double x = rng.uniform(-box->x_bound, box->x_bound);
            const double y = rng.uniform(-box->y_bound, box->y_bound);
            return HPoint(x, y, z);
        }
        const auto& sc = std::get<ScaledRegion>(region);
        const double z = std::exp(rng.uniform(std::log(sc.z_lo), std::log(sc.z_hi)));
        const double hw = sc.half_width_per_z * z;
        const double x = rng.uniform(-hw, hw);
        const double y = rng.uniform(-hw, hw);
        return HPoint(x, y, z);
    }
};

void validate_region(const Region& region) {
    auto check_z = [](double lo, double hi) {
        if (!(lo > 0.0) || !(hi >= lo) || !std::isfinite(hi))
            throw std::invalid_argument("covering_radius: bad z range");
    };
    if (const auto* box = std::get_if<BoxRegion>(&region)) {
        if (!(box->x_bound >= 0.0) || !(box->y_bound >= 0.0))
            throw std::invalid_argument("covering_radius: bad horizontal bound");
        check_z(box->z_lo, box->z_hi);
    } else {
        const auto& sc = std::get<ScaledRegion>(region);
        if (!(sc.half_width_per_z >= 0.0))
            throw std::invalid_argument("covering_radius: bad horizontal bound");
        check_z(sc.z_lo, sc.z_hi);
    }
}

struct WorstSample {
    double u{-1.0};
    std::int64_t sample_index{std::numeric_limits<std::int64_t>::max()};
    HPoint sample;
};

}  // namespace

CoveringResult covering_radius(const PointCloud& cloud, const Region& region,
                               std::int64_t n_samples, std::uint64_t seed) {
    if (cloud.empty()) throw std::invalid_argument("covering_radius: empty cloud");
    if (n_samples < 1) throw std::invalid_argument("covering_radius: need at least one sample");
    validate_region(region);

    // Height-sorted view of the cloud.  For a sample at height zs, a point at
    // height zq is at least acosh1p((zs-zq)^2 / (2 zs zq)) away, and that
    // bound is monotone as zq recedes from zs, so a two-sided expanding scan
    // can stop exactly when no closer point can exist.  Results equal the
    // full brute-force minimum.
    const std::size_t n = cloud.size();
    const auto& pts = cloud.points();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        if (pts[i].z != pts[j].z) return pts[i].z < pts[j].z;
        return i < j;
    });
    std::vector<double> zs_sorted(n);
    for (std::size_t i = 0; i < n; ++i) zs_sorted[i] = pts[order[i]].z;

    auto nearest_u = [&](const HPoint& s) {
        const std::size_t pos =
            std::lower_bound(zs_sorted.begin(), zs_sorted.end(), s.z) - zs_sorted.begin();
        double best = std::numeric_limits<double>::infinity();
        std::ptrdiff_t lo = static_cast<std::ptrdiff_t>(pos) - 1;
        std::size_t hi = pos;
        auto vert_bound = [&](double zq) {
            const double dz = s.z - zq;
            return (dz * dz) / (2.0 * s.z * zq);
        };
        for (;;) {
            const bool lo_ok = lo >= 0;
            const bool hi_ok = hi < n;
            if (!lo_ok && !hi_ok) break;
            double lo_b = lo_ok ? vert_bound(zs_sorted[static_cast<std::size_t>(lo)])
                                : std::numeric_limits<double>::infinity();
            double hi_b = hi_ok ? vert_bound(zs_sorted[hi]) : std::numeric_limits<double>::infinity();
            if (std::min(lo_b, hi_b) >= best) break;
            if (lo_b <= hi_b) {
                best = std::min(best, usq(s, pts[order[static_cast<std::size_t>(lo)]]));
                --lo;
            } else {
                best = std::min(best, usq(s, pts[order[hi]]));
                ++hi;
            }
        }
        return best;
    };

    constexpr std::size_t kChunk = 4096;
    RegionSampler sampler{region};
    auto scan_samples = [&](std::size_t begin, std::size_t end) {
        // Per-chunk RNG stream keyed by chunk index: sample values depend only
        // on (seed, global sample index), not on threading.
        SplitMix64 rng = child_rng(seed, "covering-samples", begin / kChunk);
        WorstSample worst;
        for (std::size_t k = begin; k < end; ++k) {
            const HPoint s = sampler.draw(rng);
            const double u = nearest_u(s);
            if (u > worst.u) worst = {u, static_cast<std::int64_t>(k), s};
        }
        return worst;
    };
    WorstSample worst =
        chunked_reduce(static_cast<std::size_t>(n_samples), kChunk, WorstSample{}, scan_samples,
                       [](WorstSample acc, const WorstSample& w) {
                           if (w.u > acc.u) return w;
                           return acc;
                       });

    return CoveringResult{acosh1p(worst.u), worst.sample, n_samples};
}

}  // namespace horokit
