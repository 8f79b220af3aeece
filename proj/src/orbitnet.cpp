#include "horokit/orbitnet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string_view>

#include "horokit/errors.hpp"
#include "horokit/parallel.hpp"
#include "horokit/report.hpp"

namespace horokit {

namespace {

double u_between(const HPoint& p, const HPoint& q) {
    const double dx = p.x - q.x, dy = p.y - q.y, dz = p.z - q.z;
    return (dx * dx + dy * dy + dz * dz) / (2.0 * p.z * q.z);
}

double parse_field(std::string_view field, const std::string& path, std::size_t line_no) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(path + ":" + std::to_string(line_no) + ": bad numeric field '" +
                         std::string(field) + "'");
    return v;
}

// Kept orbit points ordered by height.  Any point within distance t of p has
// |ln(z_p / z_q)| <= t (the vertical geodesic is the z-extremal one), so only
// a z-slab around p needs exact checking.
class ZIndex {
  public:
    void insert(double z, std::uint32_t idx) {
        const auto pos = std::lower_bound(entries_.begin(), entries_.end(),
                                          std::pair<double, std::uint32_t>{z, idx});
        entries_.insert(pos, {z, idx});
    }

    template <class Check>
    bool any_in_slab(double z_lo, double z_hi, Check&& check) const {
        auto it = std::lower_bound(
            entries_.begin(), entries_.end(), z_lo,
            [](const std::pair<double, std::uint32_t>& e, double v) { return e.first < v; });
        for (; it != entries_.end() && it->first <= z_hi; ++it)
            if (check(it->second)) return true;
        return false;
    }

  private:
    std::vector<std::pair<double, std::uint32_t>> entries_;
};

}  // namespace

GeneratorSet load_generators(const std::string& path, double det_tolerance) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open generator file: " + path);

    GeneratorSet out;
    out.source = path;
    out.det_tolerance = det_tolerance;

    std::vector<SL2C> base;
    std::string line;
    std::size_t line_no = 0, record_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view body = line;
        if (const auto hash = body.find('#'); hash != std::string_view::npos)
            body = body.substr(0, hash);
        // Skip blank lines.
        if (body.find_first_not_of(" \t\r") == std::string_view::npos) continue;

        double f[8];
        std::size_t field = 0, start = 0;
        for (std::size_t pos = 0; pos <= body.size(); ++pos) {
            if (pos != body.size() && body[pos] != ',') continue;
            if (field >= 8)
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": expected 8 comma-separated fields");
            f[field++] = parse_field(body.substr(start, pos - start), path, line_no);
            start = pos + 1;
        }
        if (field != 8)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected 8 comma-separated fields, got " + std::to_string(field));

        ++record_no;
        const SL2C g{{f[0], f[1]}, {f[2], f[3]}, {f[4], f[5]}, {f[6], f[7]}};
        if (!g.is_unimodular(det_tolerance))
            throw std::invalid_argument(
                "generator " + std::to_string(record_no) + " (" + path + ":" +
                std::to_string(line_no) + "): determinant " + format_double17(std::abs(g.det())) +
                " in modulus is out of tolerance " + format_double17(det_tolerance));
        base.push_back(g);
    }
    if (base.empty()) throw ParseError(path + ": no generator records");

    auto adjoin = [&](const SL2C& g) {
        if (std::find(out.matrices.begin(), out.matrices.end(), g) == out.matrices.end())
            out.matrices.push_back(g);
    };
    for (const SL2C& g : base) adjoin(g);
    for (const SL2C& g : base) adjoin(g.inverse());
    return out;
}

OrbitCloud enumerate_orbit(const GeneratorSet& gens, const HPoint& basepoint, std::int64_t L,
                           const OrbitOptions& opts) {
    if (L < 0) throw std::invalid_argument("enumerate_orbit: L must be >= 0");
    if (!(opts.merge_tolerance >= 0.0) || !std::isfinite(opts.merge_tolerance))
        throw std::invalid_argument("enumerate_orbit: merge_tolerance must be finite and >= 0");
    if (opts.point_budget < 1) throw BudgetError("enumerate_orbit: zero point budget");

    const double tol = opts.merge_tolerance;
    const double merge_u = std::cosh(tol) - 1.0;
    // Slab half-width in ln z, padded so rounding never excludes a true merge.
    const double slab_lo = std::exp(-tol) * (1.0 - 1e-12);
    const double slab_hi = std::exp(tol) * (1.0 + 1e-12);

    std::vector<HPoint> kept{basepoint};
    std::vector<std::int64_t> lengths{0};
    ZIndex index;
    index.insert(basepoint.z, 0);

    std::vector<std::uint32_t> frontier{0};
    std::vector<std::uint32_t> next;
    for (std::int64_t depth = 1; depth <= L && !frontier.empty(); ++depth) {
        next.clear();
        for (const std::uint32_t f : frontier) {
            const HPoint p = kept[f];
            for (const SL2C& g : gens.matrices) {
                const HPoint q = mobius_apply(g, p);
                const bool merged = index.any_in_slab(
                    q.z * slab_lo, q.z * slab_hi,
                    [&](std::uint32_t i) { return u_between(q, kept[i]) <= merge_u; });
                if (merged) continue;
                if (kept.size() >= opts.point_budget)
                    throw BudgetError("enumerate_orbit: point budget " +
                                      std::to_string(opts.point_budget) + " exceeded at depth " +
                                      std::to_string(depth));
                const std::uint32_t idx = static_cast<std::uint32_t>(kept.size());
                kept.push_back(q);
                lengths.push_back(depth);
                index.insert(q.z, idx);
                next.push_back(idx);
            }
        }
        frontier.swap(next);
    }

    OrbitCloud orbit;
    orbit.points = PointCloud("orbit-L" + std::to_string(L), std::move(kept));
    orbit.word_length = std::move(lengths);
    orbit.basepoint = basepoint;
    orbit.merge_tolerance = tol;
    return orbit;
}

void write_orbit_csv(const OrbitCloud& orbit, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,y,z,word_length\n";
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        const HPoint& p = orbit.points[i];
        out << format_double17(p.x) << ',' << format_double17(p.y) << ',' << format_double17(p.z)
            << ',' << orbit.word_length[i] << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

QIFit fit_two_sided(const std::vector<std::pair<std::int64_t, double>>& pairs) {
    constexpr int kGrid = 140;
    QIFit best{1.0, std::numeric_limits<double>::infinity()};
    for (int j = 0; j < kGrid; ++j) {
        const double lambda = std::pow(8.0, static_cast<double>(j) / (kGrid - 1));
        double eps = 0.0;
        for (const auto& [wl, d] : pairs) {
            const double w = static_cast<double>(wl);
            eps = std::max(eps, d - lambda * w);
            eps = std::max(eps, w / lambda - d);
        }
        if (eps < best.epsilon) best = QIFit{lambda, eps};
    }
    if (!std::isfinite(best.epsilon)) best = QIFit{1.0, 0.0};  // empty scatter
    return best;
}

}  // namespace

QIScatter qi_scatter(const OrbitCloud& orbit) {
    if (orbit.points.empty()) throw std::invalid_argument("qi_scatter: empty orbit");

    QIScatter out;
    out.pairs.reserve(orbit.points.size());
    std::int64_t max_wl = 0;
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        out.pairs.emplace_back(orbit.word_length[i], dist(orbit.basepoint, orbit.points[i]));
        max_wl = std::max(max_wl, orbit.word_length[i]);
    }

    out.fit_full = fit_two_sided(out.pairs);
    std::vector<std::pair<std::int64_t, double>> half;
    for (const auto& pr : out.pairs)
        if (pr.first <= max_wl / 2) half.push_back(pr);
    out.fit_half = half.empty() ? out.fit_full : fit_two_sided(half);
    out.qi_suspect = max_wl >= 4 && out.fit_full.lambda >= 1.25 * out.fit_half.lambda;
    return out;
}

HoroBand::HoroBand(double h0_, double epsilon_) : h0(h0_), epsilon(epsilon_) {
    if (!(h0 > 0.0) || !std::isfinite(h0))
        throw std::invalid_argument("HoroBand: center height must be finite and positive");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("HoroBand: epsilon must be finite and >= 0");
}

bool HoroBand::contains(const HPoint& p) const { return std::abs(std::log(p.z / h0)) <= epsilon; }

std::vector<std::size_t> band_member_indices(const PointCloud& cloud, const HoroBand& band) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < cloud.size(); ++i)
        if (band.contains(cloud[i])) idx.push_back(i);
    return idx;
}

PointCloud horoband_intersect(const OrbitCloud& orbit, const HoroBand& band) {
    const std::vector<std::size_t> idx = band_member_indices(orbit.points, band);
    return orbit.points.subset(idx, orbit.points.label() + "-band");
}

bool GraphMetric::unreachable(double d) { return std::isinf(d); }

GraphMetric GraphMetric::build(const PointCloud& cloud, double edge_threshold,
                               std::size_t node_budget) {
    if (!(edge_threshold > 0.0) || !std::isfinite(edge_threshold))
        throw std::invalid_argument("band_graph_metric: edge_threshold must be finite and > 0");
    const std::size_t n = cloud.size();
    if (n > node_budget)
        throw BudgetError("band_graph_metric: " + std::to_string(n) + " nodes exceeds budget " +
                          std::to_string(node_budget));

    GraphMetric m;
    m.n_ = n;
    m.threshold_ = edge_threshold;
    if (n == 0) return m;

    // Adjacency in CSR form; neighbor lists come out ascending.
    const double u_thresh = std::cosh(edge_threshold) - 1.0;
    std::vector<std::uint32_t> degree(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (u_between(cloud[i], cloud[j]) <= u_thresh) {
                ++degree[i];
                ++degree[j];
                ++m.edges_;
            }
    if (m.edges_ > 20'000'000)
        throw BudgetError("band_graph_metric: " + std::to_string(m.edges_) +
                          " edges exceed the 20000000 edge budget");

    std::vector<std::size_t> row(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row[i + 1] = row[i] + degree[i];
    std::vector<std::uint32_t> nbr(row[n]);
    std::vector<double> wgt(row[n]);
    std::vector<std::size_t> fill = row;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double u = u_between(cloud[i], cloud[j]);
            if (u > u_thresh) continue;
            const double w = acosh1p(u);
            nbr[fill[i]] = static_cast<std::uint32_t>(j);
            wgt[fill[i]++] = w;
            nbr[fill[j]] = static_cast<std::uint32_t>(i);
            wgt[fill[j]++] = w;
        }

    constexpr double kInf = std::numeric_limits<double>::infinity();
    m.table_.assign(n * n, kInf);

    // One Dijkstra per source; sources are independent, so parallel chunks
    // write disjoint rows and the table is deterministic.
    chunked_reduce<int>(
        n, 8, 0,
        [&](std::size_t b, std::size_t e) {
            using Item = std::pair<double, std::uint32_t>;
            std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
            for (std::size_t s = b; s < e; ++s) {
                double* d = m.table_.data() + s * n;
                d[s] = 0.0;
                pq.push({0.0, static_cast<std::uint32_t>(s)});
                while (!pq.empty()) {
                    const auto [du, u] = pq.top();
                    pq.pop();
                    if (du > d[u]) continue;
                    for (std::size_t t = row[u]; t < row[u + 1]; ++t) {
                        const double alt = du + wgt[t];
                        if (alt < d[nbr[t]]) {
                            d[nbr[t]] = alt;
                            pq.push({alt, nbr[t]});
                        }
                    }
                }
            }
            return 0;
        },
        [](int a, int) { return a; });

    m.connected_ =
        std::none_of(m.table_.begin(), m.table_.end(), [](double d) { return std::isinf(d); });
    return m;
}

GridCompareReport grid_compare(const PointCloud& cloud, const GraphMetric& metric,
                               const GridCompareOptions& opts) {
    if (metric.size() != cloud.size())
        throw std::invalid_argument("grid_compare: metric size does not match cloud");
    const std::size_t n = cloud.size();

    std::size_t k = opts.k;
    if (k == 0)
        while ((k + 1) * (k + 1) <= n) ++k;
    if (k < 2) throw std::invalid_argument("grid_compare: need grid side k >= 2");
    if (k * k > n) throw std::invalid_argument("grid_compare: cloud has fewer than k^2 points");

    GridCompareReport rep;
    rep.k = k;
    rep.used_points = k * k;
    rep.kept = trim_keep_indices(cloud, k * k);
    const std::size_t m = rep.kept.size();

    double h = opts.plane_height;
    if (h == 0.0) {
        std::vector<double> zs(m);
        for (std::size_t i = 0; i < m; ++i) zs[i] = cloud[rep.kept[i]].z;
        std::sort(zs.begin(), zs.end());
        h = zs[m / 2];
    }
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("grid_compare: plane height must be finite and > 0");
    rep.plane_height = h;

    for (std::size_t p = 0; p < m && rep.graph_connected; ++p)
        for (std::size_t q = p + 1; q < m; ++q)
            if (GraphMetric::unreachable(metric(rep.kept[p], rep.kept[q]))) {
                rep.graph_connected = false;
                break;
            }
    if (!rep.graph_connected) return rep;  // constants are meaningless; abort this instance

    // Unit: median nearest-neighbor ambient distance of the kept subcloud.
    {
        std::vector<double> nn(m);
        for (std::size_t p = 0; p < m; ++p) {
            double best_u = std::numeric_limits<double>::infinity();
            for (std::size_t q = 0; q < m; ++q)
                if (q != p)
                    best_u = std::min(best_u, u_between(cloud[rep.kept[p]], cloud[rep.kept[q]]));
            nn[p] = acosh1p(best_u);
        }
        std::sort(nn.begin(), nn.end());
        rep.unit = nn[m / 2];
    }

    // Horospherical plane coordinates (x/h, y/h): the intrinsic metric of the
    // horosphere z = h.  Heights are carried along (scaled) only to keep the
    // cloud points distinct; the cross metric below ignores them.
    std::vector<HPoint> plane;
    plane.reserve(m);
    for (std::size_t p = 0; p < m; ++p) {
        const HPoint& s = cloud[rep.kept[p]];
        plane.push_back(HPoint{s.x / h, s.y / h, s.z / h});
    }
    double x_min = plane[0].x, x_max = plane[0].x, y_min = plane[0].y, y_max = plane[0].y;
    for (const HPoint& p : plane) {
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument(
            "grid_compare: planar bounding box is degenerate (collinear band)");
    const double sx = (x_max - x_min) / static_cast<double>(k - 1);
    const double sy = (y_max - y_min) / static_cast<double>(k - 1);
    std::vector<HPoint> grid;
    grid.reserve(k * k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i)
            grid.push_back(HPoint{x_min + static_cast<double>(i) * sx,
                                  y_min + static_cast<double>(j) * sy, 1.0});

    const PointCloud left(cloud.label() + "-plane", std::move(plane));
    const PointCloud right("reference-grid-k" + std::to_string(k), std::move(grid));

    const CrossDist planar = [&](std::size_t i, std::size_t j) {
        const double dx = left[i].x - right[j].x, dy = left[i].y - right[j].y;
        return std::sqrt(dx * dx + dy * dy);
    };
    BottleneckOptions bopts;
    bopts.compute_lipschitz = false;
    const BottleneckBijection bb = bottleneck_bijection(left, right, &planar, bopts);
    rep.bottleneck_radius = bb.bottleneck;
    rep.pairing = bb.pairing;

    const CrossDist dist_band = [&](std::size_t p, std::size_t q) {
        return metric(rep.kept[p], rep.kept[q]);
    };
    const CrossDist dist_grid = [&](std::size_t gi, std::size_t gj) {
        const auto xi = static_cast<std::ptrdiff_t>(gi % k), yi = static_cast<std::ptrdiff_t>(gi / k);
        const auto xj = static_cast<std::ptrdiff_t>(gj % k), yj = static_cast<std::ptrdiff_t>(gj / k);
        return rep.unit * static_cast<double>(std::abs(xi - xj) + std::abs(yi - yj));
    };
    const LipschitzConstants lips = lipschitz_constants(rep.pairing, dist_band, dist_grid);
    rep.lip_forward = lips.forward;
    rep.lip_inverse = lips.inverse;
    return rep;
}

}  // namespace horokit
