#include "horokit/tla.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "horokit/parallel.hpp"

namespace horokit {

namespace {

void validate_map(const std::vector<std::ptrdiff_t>& map, std::size_t n, const char* name) {
    if (map.size() != n)
        throw std::invalid_argument(std::string("FiniteAction: ") + name +
                                    " size does not match carrier");
    std::vector<char> seen(n, 0);
    for (std::size_t x = 0; x < n; ++x) {
        const std::ptrdiff_t y = map[x];
        if (y == FiniteAction::kUndef) continue;
        if (y < 0 || static_cast<std::size_t>(y) >= n)
            throw std::invalid_argument(std::string("FiniteAction: ") + name +
                                        " image out of range");
        if (seen[static_cast<std::size_t>(y)])
            throw std::invalid_argument(std::string("FiniteAction: ") + name +
                                        " is not injective on its domain");
        seen[static_cast<std::size_t>(y)] = 1;
    }
}

std::vector<std::ptrdiff_t> invert(const std::vector<std::ptrdiff_t>& map) {
    std::vector<std::ptrdiff_t> inv(map.size(), FiniteAction::kUndef);
    for (std::size_t x = 0; x < map.size(); ++x)
        if (map[x] != FiniteAction::kUndef) inv[static_cast<std::size_t>(map[x])] =
            static_cast<std::ptrdiff_t>(x);
    return inv;
}

double coverage(const std::vector<std::ptrdiff_t>& map) {
    if (map.empty()) return 1.0;
    std::size_t defined = 0;
    for (std::ptrdiff_t y : map) defined += (y != FiniteAction::kUndef);
    return static_cast<double>(defined) / static_cast<double>(map.size());
}

std::string word_key(std::int64_t m, std::int64_t n) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%lld,%lld", static_cast<long long>(m),
                  static_cast<long long>(n));
    return buf;
}

}  // namespace

FiniteAction::FiniteAction(PointCloud carrier, std::vector<std::ptrdiff_t> e1,
                           std::vector<std::ptrdiff_t> e2)
    : carrier_(std::move(carrier)), e1_(std::move(e1)), e2_(std::move(e2)) {
    const std::size_t n = carrier_.size();
    validate_map(e1_, n, "e1");
    validate_map(e2_, n, "e2");
    for (std::size_t x = 0; x < n; ++x) {
        // Commutation is required wherever both composites are defined.
        const std::ptrdiff_t a = e1_[x], b = e2_[x];
        if (a == kUndef || b == kUndef) continue;
        const std::ptrdiff_t ab = e2_[static_cast<std::size_t>(a)];
        const std::ptrdiff_t ba = e1_[static_cast<std::size_t>(b)];
        if (ab != kUndef && ba != kUndef && ab != ba)
            throw std::invalid_argument("FiniteAction: generator maps do not commute");
    }
    e1_inv_ = invert(e1_);
    e2_inv_ = invert(e2_);
}

double FiniteAction::coverage_e1() const { return coverage(e1_); }
double FiniteAction::coverage_e2() const { return coverage(e2_); }

std::ptrdiff_t FiniteAction::apply_word(std::size_t i, std::int64_t m, std::int64_t n) const {
    if (i >= carrier_.size()) throw std::out_of_range("FiniteAction::apply_word: bad index");
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(i);
    const std::vector<std::ptrdiff_t>& step1 = m >= 0 ? e1_ : e1_inv_;
    for (std::int64_t s = 0, steps = m < 0 ? -m : m; s < steps; ++s) {
        cur = step1[static_cast<std::size_t>(cur)];
        if (cur == kUndef) return kUndef;
    }
    const std::vector<std::ptrdiff_t>& step2 = n >= 0 ? e2_ : e2_inv_;
    for (std::int64_t s = 0, steps = n < 0 ? -n : n; s < steps; ++s) {
        cur = step2[static_cast<std::size_t>(cur)];
        if (cur == kUndef) return kUndef;
    }
    return cur;
}

FiniteAction make_dyadic_action(const LatticeWindow& window) {
    const std::vector<LatticeCoord>& pts = window.points();
    std::vector<std::ptrdiff_t> e1(pts.size(), FiniteAction::kUndef);
    std::vector<std::ptrdiff_t> e2(pts.size(), FiniteAction::kUndef);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (auto j = window.index_of(act(GridVector{1, 0}, pts[i])))
            e1[i] = static_cast<std::ptrdiff_t>(*j);
        if (auto j = window.index_of(act(GridVector{0, 1}, pts[i])))
            e2[i] = static_cast<std::ptrdiff_t>(*j);
    }
    return FiniteAction(window.to_cloud(), std::move(e1), std::move(e2));
}

nlohmann::ordered_json TLACertificate::to_json() const {
    nlohmann::ordered_json j;
    j["pass"] = pass;
    j["k"] = k;
    j["carrier_label"] = carrier_label;
    j["domain_coverage"] = {{"e1", coverage_e1}, {"e2", coverage_e2}};
    if (displacement_bound)
        j["displacement_bound"] = *displacement_bound;
    else
        j["displacement_bound"] = nullptr;
    j["violation_count"] = violation_count;
    nlohmann::ordered_json viol = nlohmann::ordered_json::array();
    for (const FreenessViolation& v : violations)
        viol.push_back({{"m", v.m}, {"n", v.n}, {"point", v.point}});
    j["violations"] = std::move(viol);
    nlohmann::ordered_json disp;
    for (const WordDisplacement& w : words) {
        if (w.defined > 0)
            disp[word_key(w.m, w.n)] = w.max_displacement;
        else
            disp[word_key(w.m, w.n)] = nullptr;
    }
    j["max_displacement"] = std::move(disp);
    return j;
}

TLACertificate verify_translation_like(const FiniteAction& action, std::int64_t K,
                                       std::optional<double> displacement_bound) {
    if (K < 1) throw std::invalid_argument("verify_translation_like: K must be >= 1");
    const PointCloud& cloud = action.carrier();
    const std::size_t n = cloud.size();

    TLACertificate cert;
    cert.k = K;
    cert.carrier_label = cloud.label();
    cert.coverage_e1 = action.coverage_e1();
    cert.coverage_e2 = action.coverage_e2();
    cert.displacement_bound = displacement_bound;

    struct WordAcc {
        double max_disp{0.0};
        double min_disp{std::numeric_limits<double>::infinity()};
        std::uint64_t defined{0};
        std::vector<std::size_t> fixed;
    };

    for (std::int64_t m = -K; m <= K; ++m) {
        for (std::int64_t nn = -K; nn <= K; ++nn) {
            if (m == 0 && nn == 0) continue;
            WordAcc acc = chunked_reduce<WordAcc>(
                n, 1024, WordAcc{},
                [&](std::size_t b, std::size_t e) {
                    WordAcc local;
                    for (std::size_t i = b; i < e; ++i) {
                        const std::ptrdiff_t j = action.apply_word(i, m, nn);
                        if (j == FiniteAction::kUndef) continue;
                        ++local.defined;
                        if (static_cast<std::size_t>(j) == i) {
                            local.fixed.push_back(i);
                            local.min_disp = 0.0;
                        } else {
                            const double d = dist(cloud[i], cloud[static_cast<std::size_t>(j)]);
                            local.max_disp = std::max(local.max_disp, d);
                            local.min_disp = std::min(local.min_disp, d);
                        }
                    }
                    return local;
                },
                [](WordAcc a, const WordAcc& b) {
                    a.max_disp = std::max(a.max_disp, b.max_disp);
                    a.min_disp = std::min(a.min_disp, b.min_disp);
                    a.defined += b.defined;
                    a.fixed.insert(a.fixed.end(), b.fixed.begin(), b.fixed.end());
                    return a;
                });

            cert.words.push_back(WordDisplacement{
                m, nn, acc.defined, acc.max_disp, acc.defined == 0 ? 0.0 : acc.min_disp});
            cert.violation_count += acc.fixed.size();
            for (std::size_t p : acc.fixed) {
                if (cert.violations.size() >= TLACertificate::kMaxRecordedViolations) break;
                cert.violations.push_back(FreenessViolation{m, nn, p});
            }
        }
    }

    cert.pass = cert.violation_count == 0;
    if (displacement_bound) {
        for (const WordDisplacement& w : cert.words)
            if (w.defined > 0 && w.max_displacement > *displacement_bound) cert.pass = false;
    }
    return cert;
}

FiniteAction conjugate_action(const FiniteAction& source, std::span<const std::size_t> pairing,
                              PointCloud target) {
    const std::size_t n = source.size();
    if (pairing.size() != n || target.size() != n)
        throw std::invalid_argument("conjugate_action: cardinality mismatch");
    std::vector<char> seen(n, 0);
    for (std::size_t y : pairing) {
        if (y >= n || seen[y])
            throw std::invalid_argument("conjugate_action: pairing is not a bijection");
        seen[y] = 1;
    }

    auto transport = [&](const std::vector<std::ptrdiff_t>& g) {
        std::vector<std::ptrdiff_t> out(n, FiniteAction::kUndef);
        for (std::size_t x = 0; x < n; ++x)
            if (g[x] != FiniteAction::kUndef)
                out[pairing[x]] =
                    static_cast<std::ptrdiff_t>(pairing[static_cast<std::size_t>(g[x])]);
        return out;
    };
    return FiniteAction(std::move(target), transport(source.e1()), transport(source.e2()));
}

ConjugationBoundReport verify_conjugation_bound(const FiniteAction& source,
                                                const FiniteAction& conjugated,
                                                std::span<const std::size_t> pairing,
                                                double lip_forward, std::int64_t K,
                                                double slack) {
    const std::size_t n = source.size();
    if (pairing.size() != n || conjugated.size() != n)
        throw std::invalid_argument("verify_conjugation_bound: cardinality mismatch");
    if (K < 1) throw std::invalid_argument("verify_conjugation_bound: K must be >= 1");

    ConjugationBoundReport rep;
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (std::int64_t m = -K; m <= K; ++m) {
        for (std::int64_t nn = -K; nn <= K; ++nn) {
            if (m == 0 && nn == 0) continue;
            for (std::size_t x = 0; x < n; ++x) {
                const std::ptrdiff_t hx_raw = source.apply_word(x, m, nn);
                if (hx_raw == FiniteAction::kUndef) continue;
                const std::size_t hx = static_cast<std::size_t>(hx_raw);
                const std::size_t y = pairing[x];
                const std::ptrdiff_t hy_raw = conjugated.apply_word(y, m, nn);
                if (hy_raw == FiniteAction::kUndef ||
                    static_cast<std::size_t>(hy_raw) != pairing[hx])
                    throw std::invalid_argument(
                        "verify_conjugation_bound: conjugated map does not transport the source map");
                const std::size_t hy = static_cast<std::size_t>(hy_raw);
                const double d_src = dist(source.carrier()[x], source.carrier()[hx]);
                const double d_tgt = dist(conjugated.carrier()[y], conjugated.carrier()[hy]);
                rep.max_excess = std::max(rep.max_excess, d_tgt - lip_forward * d_src);
                if (d_src > 0.0) rep.max_ratio = std::max(rep.max_ratio, d_tgt / d_src);
                ++rep.pairs_checked;
            }
        }
    }
    if (rep.pairs_checked == 0) rep.max_excess = 0.0;
    rep.pass = rep.max_excess <= slack;
    return rep;
}

OrbitPartition orbit_partition(const FiniteAction& action) {
    const std::size_t n = action.size();
    std::vector<char> visited(n, 0);
    std::vector<std::int64_t> off_m(n, 0), off_n(n, 0);
    std::vector<std::size_t> queue;
    OrbitPartition out;

    for (std::size_t root = 0; root < n; ++root) {
        if (visited[root]) continue;
        queue.clear();
        queue.push_back(root);
        visited[root] = 1;
        off_m[root] = 0;
        off_n[root] = 0;
        std::int64_t min_m = 0, max_m = 0, min_n = 0, max_n = 0;
        bool consistent = true;

        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const std::size_t x = queue[qi];
            auto visit = [&](std::ptrdiff_t y_raw, std::int64_t dm, std::int64_t dn) {
                if (y_raw == FiniteAction::kUndef) return;
                const std::size_t y = static_cast<std::size_t>(y_raw);
                const std::int64_t ym = off_m[x] + dm, yn = off_n[x] + dn;
                if (!visited[y]) {
                    visited[y] = 1;
                    off_m[y] = ym;
                    off_n[y] = yn;
                    min_m = std::min(min_m, ym);
                    max_m = std::max(max_m, ym);
                    min_n = std::min(min_n, yn);
                    max_n = std::max(max_n, yn);
                    queue.push_back(y);
                } else if (off_m[y] != ym || off_n[y] != yn) {
                    // Reached twice with different word exponents: the
                    // component does not embed in the grid (non-free action).
                    consistent = false;
                }
            };
            visit(action.e1()[x], 1, 0);
            visit(action.e2()[x], 0, 1);
            visit(action.e1_inv()[x], -1, 0);
            visit(action.e2_inv()[x], 0, -1);
        }

        OrbitComponent comp;
        comp.members = queue;
        std::sort(comp.members.begin(), comp.members.end());
        comp.extent_e1 = max_m - min_m + 1;
        comp.extent_e2 = max_n - min_n + 1;
        comp.grid_consistent = consistent;
        out.components.push_back(std::move(comp));
    }
    return out;
}

}  // namespace horokit
