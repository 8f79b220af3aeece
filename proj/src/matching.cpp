#include "horokit/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "horokit/errors.hpp"
#include "horokit/parallel.hpp"
#include "horokit/rng.hpp"

namespace horokit {

CrossDist ambient_cross(const PointCloud& left, const PointCloud& right) {
    return [&left, &right](std::size_t i, std::size_t j) { return dist(left[i], right[j]); };
}

DisplacementGraph DisplacementGraph::build(std::size_t n_left, std::size_t n_right,
                                           const CrossDist& cross, double threshold) {
    DisplacementGraph g;
    g.n_left = n_left;
    g.n_right = n_right;
    g.threshold = threshold;
    g.adj.resize(n_left);
    for (std::size_t i = 0; i < n_left; ++i)
        for (std::size_t j = 0; j < n_right; ++j)
            if (cross(i, j) <= threshold) g.adj[i].push_back(j);
    return g;
}

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

// Hopcroft-Karp over CSR adjacency.  Left vertices and their edge lists are
// scanned in ascending order in both the BFS layering and the DFS
// augmentation, so the matching produced is a deterministic function of the
// graph.
class HopcroftKarp {
  public:
    HopcroftKarp(std::size_t n_left, std::size_t n_right, const std::size_t* offsets,
                 const std::size_t* edges)
        : nl_(n_left), nr_(n_right), off_(offsets), edges_(edges) {}

    std::size_t run(std::vector<std::ptrdiff_t>& l2r, std::vector<std::ptrdiff_t>& r2l) {
        l2r.assign(nl_, -1);
        r2l.assign(nr_, -1);
        dist_.assign(nl_, kInf);
        ptr_.assign(nl_, 0);
        queue_.reserve(nl_);
        std::size_t matched = 0;
        while (bfs(l2r, r2l)) {
            for (std::size_t u = 0; u < nl_; ++u) ptr_[u] = off_[u];
            for (std::size_t u = 0; u < nl_; ++u)
                if (l2r[u] < 0 && dfs(u, l2r, r2l)) ++matched;
        }
        return matched;
    }

  private:
    bool bfs(const std::vector<std::ptrdiff_t>& l2r, const std::vector<std::ptrdiff_t>& r2l) {
        queue_.clear();
        for (std::size_t u = 0; u < nl_; ++u) {
            if (l2r[u] < 0) {
                dist_[u] = 0;
                queue_.push_back(u);
            } else {
                dist_[u] = kInf;
            }
        }
        bool reachable_free = false;
        for (std::size_t head = 0; head < queue_.size(); ++head) {
            const std::size_t u = queue_[head];
            for (std::size_t e = off_[u]; e < off_[u + 1]; ++e) {
                const std::size_t v = edges_[e];
                const std::ptrdiff_t w = r2l[v];
                if (w < 0) {
                    reachable_free = true;
                } else if (dist_[static_cast<std::size_t>(w)] == kInf) {
                    dist_[static_cast<std::size_t>(w)] = dist_[u] + 1;
                    queue_.push_back(static_cast<std::size_t>(w));
                }
            }
        }
        return reachable_free;
    }

    bool dfs(std::size_t u, std::vector<std::ptrdiff_t>& l2r, std::vector<std::ptrdiff_t>& r2l) {
        for (std::size_t& e = ptr_[u]; e < off_[u + 1]; ++e) {
            const std::size_t v = edges_[e];
            const std::ptrdiff_t w = r2l[v];
            if (w < 0 || (dist_[static_cast<std::size_t>(w)] == dist_[u] + 1 &&
                          dfs(static_cast<std::size_t>(w), l2r, r2l))) {
                l2r[u] = static_cast<std::ptrdiff_t>(v);
                r2l[v] = static_cast<std::ptrdiff_t>(u);
                return true;
            }
        }
        dist_[u] = kInf;
        return false;
    }

    std::size_t nl_, nr_;
    const std::size_t* off_;
    const std::size_t* edges_;
    std::vector<std::size_t> dist_, ptr_, queue_;
};

struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> edges;
};

Csr csr_from_adj(const std::vector<std::vector<std::size_t>>& adj) {
    Csr csr;
    csr.offsets.resize(adj.size() + 1, 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        total += adj[i].size();
        csr.offsets[i + 1] = total;
    }
    csr.edges.reserve(total);
    for (const auto& row : adj) csr.edges.insert(csr.edges.end(), row.begin(), row.end());
    return csr;
}

}  // namespace

MatchingResult max_matching(const DisplacementGraph& graph) {
    for (const auto& row : graph.adj)
        for (std::size_t v : row)
            if (v >= graph.n_right) throw std::invalid_argument("max_matching: edge out of range");
    Csr csr = csr_from_adj(graph.adj);
    MatchingResult result;
    HopcroftKarp hk(graph.n_left, graph.n_right, csr.offsets.data(), csr.edges.data());
    result.size = hk.run(result.left_to_right, result.right_to_left);
    return result;
}

std::optional<std::vector<std::size_t>> hall_violator(const DisplacementGraph& graph) {
    MatchingResult m = max_matching(graph);
    if (m.size == graph.n_left) return std::nullopt;

    // Alternating BFS from the unmatched left vertices: left -> right along
    // any edge, right -> left along matching edges.  The reachable left set S
    // has N(S) = reachable rights, and every reachable right is matched into
    // S, so |N(S)| = |S| - (number of unmatched lefts) < |S|.
    std::vector<char> left_seen(graph.n_left, 0), right_seen(graph.n_right, 0);
    std::vector<std::size_t> queue;
    for (std::size_t u = 0; u < graph.n_left; ++u)
        if (m.left_to_right[u] < 0) {
            left_seen[u] = 1;
            queue.push_back(u);
        }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t u = queue[head];
        for (std::size_t v : graph.adj[u]) {
            if (right_seen[v]) continue;
            right_seen[v] = 1;
            const std::ptrdiff_t w = m.right_to_left[v];
            if (w >= 0 && !left_seen[static_cast<std::size_t>(w)]) {
                left_seen[static_cast<std::size_t>(w)] = 1;
                queue.push_back(static_cast<std::size_t>(w));
            }
        }
    }
    std::vector<std::size_t> violator;
    for (std::size_t u = 0; u < graph.n_left; ++u)
        if (left_seen[u]) violator.push_back(u);
    return violator;
}

LipschitzConstants lipschitz_constants(std::span<const std::size_t> pairing,
                                       const CrossDist& dist_left, const CrossDist& dist_right,
                                       const LipschitzOptions& opts) {
    const std::size_t n = pairing.size();
    if (n < 2) return LipschitzConstants{};  // no distinct pairs: vacuous constants

    struct Ratios {
        double fwd{0.0}, inv{0.0};
        std::uint64_t pairs{0};
    };
    auto fold_pair = [&](Ratios& acc, std::size_t p, std::size_t q) {
        const double dl = dist_left(p, q);
        const double dr = dist_right(pairing[p], pairing[q]);
        if (!(dl > 0.0) || !(dr > 0.0))
            throw std::invalid_argument("lipschitz_constants: zero distance between distinct points");
        acc.fwd = std::max(acc.fwd, dr / dl);
        acc.inv = std::max(acc.inv, dl / dr);
        ++acc.pairs;
    };
    auto combine = [](Ratios a, const Ratios& b) {
        a.fwd = std::max(a.fwd, b.fwd);
        a.inv = std::max(a.inv, b.inv);
        a.pairs += b.pairs;
        return a;
    };

    LipschitzConstants out;
    if (n <= opts.exhaustive_cap) {
        Ratios best = chunked_reduce(
            n, 32, Ratios{},
            [&](std::size_t begin, std::size_t end) {
                Ratios acc;
                for (std::size_t p = begin; p < end; ++p)
                    for (std::size_t q = p + 1; q < n; ++q) fold_pair(acc, p, q);
                return acc;
            },
            combine);
        out.forward = best.fwd;
        out.inverse = best.inv;
        out.pairs = best.pairs;
        out.exhaustive = true;
    } else {
        constexpr std::size_t kChunk = 65536;
        Ratios best = chunked_reduce(
            opts.min_samples, kChunk, Ratios{},
            [&](std::size_t begin, std::size_t end) {
                SplitMix64 rng = child_rng(opts.seed, "lipschitz-pairs", begin / kChunk);
                Ratios acc;
                for (std::size_t k = begin; k < end; ++k) {
                    const std::size_t p = static_cast<std::size_t>(rng.next_below(n));
                    std::size_t q = static_cast<std::size_t>(rng.next_below(n - 1));
                    if (q >= p) ++q;
                    fold_pair(acc, p, q);
                }
                return acc;
            },
            combine);
        out.forward = best.fwd;
        out.inverse = best.inv;
        out.pairs = best.pairs;
        out.exhaustive = false;
    }
    return out;
}

namespace {

// Candidate thresholds: all N^2 cross distances, sorted, deduplicated.
// Chunked merge keeps peak memory proportional to the number of distinct
// values plus one row block.
std::vector<double> collect_thresholds(std::size_t n, const CrossDist& cross,
                                       const std::vector<double>* dense,
                                       std::size_t distinct_budget) {
    std::vector<double> thresholds;
    if (dense) {
        thresholds = *dense;
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        return thresholds;
    }
    const std::size_t rows_per_block = std::max<std::size_t>(1, (1u << 23) / n);
    std::vector<double> block;
    for (std::size_t i0 = 0; i0 < n; i0 += rows_per_block) {
        const std::size_t i1 = std::min(n, i0 + rows_per_block);
        block.clear();
        for (std::size_t i = i0; i < i1; ++i)
            for (std::size_t j = 0; j < n; ++j) block.push_back(cross(i, j));
        std::sort(block.begin(), block.end());
        block.erase(std::unique(block.begin(), block.end()), block.end());
        const std::size_t mid = thresholds.size();
        thresholds.insert(thresholds.end(), block.begin(), block.end());
        std::inplace_merge(thresholds.begin(), thresholds.begin() + mid, thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        if (thresholds.size() > distinct_budget)
            throw BudgetError("bottleneck_bijection: distinct threshold budget exceeded");
    }
    return thresholds;
}

// Adjacency at threshold R as CSR, built into reused buffers.
void build_csr_at(std::size_t n, const CrossDist& cross, const std::vector<double>* dense,
                  double R, std::vector<std::size_t>& offsets, std::vector<std::size_t>& edges) {
    offsets.assign(n + 1, 0);
    edges.clear();
    for (std::size_t i = 0; i < n; ++i) {
        if (dense) {
            const double* row = dense->data() + i * n;
            for (std::size_t j = 0; j < n; ++j)
                if (row[j] <= R) edges.push_back(j);
        } else {
            for (std::size_t j = 0; j < n; ++j)
                if (cross(i, j) <= R) edges.push_back(j);
        }
        offsets[i + 1] = edges.size();
    }
}

}  // namespace

BottleneckBijection bottleneckbijection_impl(const PointCloud& left, const PointCloud& right,
                                             const CrossDist& cross, const BottleneckOptions& opts) {
    const std::size_t n = left.size();
    if (n == 0) throw std::invalid_argument("bottleneck_bijection: empty clouds");
    if (right.size() != n)
        throw std::invalid_argument("bottleneck_bijection: clouds must have equal cardinality");

    // Dense distance cache below the cap; on-demand evaluation above it.
    std::vector<double> dense_table;
    const bool dense = n <= opts.dense_cap;
    if (dense) {
        dense_table.resize(n * n);
        chunked_reduce(
            n, 16, 0,
            [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i)
                    for (std::size_t j = 0; j < n; ++j) dense_table[i * n + j] = cross(i, j);
                return 0;
            },
            [](int, int) { return 0; });
    }

    std::vector<double> thresholds =
        collect_thresholds(n, cross, dense ? &dense_table : nullptr, opts.distinct_budget);

    BottleneckBijection out;
    std::vector<std::size_t> offsets, edges;
    std::vector<std::ptrdiff_t> l2r, r2l;
    auto feasible = [&](double R) {
        build_csr_at(n, cross, dense ? &dense_table : nullptr, R, offsets, edges);
        HopcroftKarp hk(n, n, offsets.data(), edges.data());
        ++out.thresholds_tried;
        return hk.run(l2r, r2l) == n;
    };

    std::size_t lo = 0, hi = thresholds.size() - 1;
    if (!feasible(thresholds[hi]))
        throw std::logic_error("bottleneck_bijection: complete graph must be feasible");
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(thresholds[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    // Rebuild the matching at R* (the last probe may have been above it).
    feasible(thresholds[lo]);
    --out.thresholds_tried;  // the rebuild is not a search probe

    out.pairing.resize(n);
    double realized = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        out.pairing[i] = static_cast<std::size_t>(l2r[i]);
        const double d =
            dense ? dense_table[i * n + out.pairing[i]] : cross(i, out.pairing[i]);
        realized = std::max(realized, d);
    }
    // Minimality over the exact threshold multiset forces the realized
    // maximum to equal the feasible threshold.
    if (realized != thresholds[lo])
        throw std::logic_error("bottleneck_bijection: realized bottleneck mismatch");
    out.bottleneck = realized;

    if (opts.compute_lipschitz) {
        const CrossDist dl = ambient_cross(left, left);
        const CrossDist dr = ambient_cross(right, right);
        LipschitzOptions lopts = opts.lipschitz;
        const LipschitzConstants lips = lipschitz_constants(out.pairing, dl, dr, lopts);
        out.lip_forward = lips.forward;
        out.lip_inverse = lips.inverse;
    }
    return out;
}

BottleneckBijection bottleneck_bijection(const PointCloud& left, const PointCloud& right,
                                         const CrossDist* cross, const BottleneckOptions& opts) {
    if (cross) return bottleneckbijection_impl(left, right, *cross, opts);
    const CrossDist ambient = ambient_cross(left, right);
    return bottleneckbijection_impl(left, right, ambient, opts);
}

std::pair<double, std::vector<std::size_t>> bottleneck_exhaustive(std::size_t n,
                                                                  const CrossDist& cross) {
    if (n == 0 || n > 10)
        throw std::invalid_argument("bottleneck_exhaustive: n must be in [1, 10]");
    std::vector<std::size_t> perm(n), best_perm;
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        bool pruned = false;
        for (std::size_t i = 0; i < n; ++i) {
            worst = std::max(worst, cross(i, perm[i]));
            if (worst >= best) {  // cannot strictly improve; true max is >= best
                pruned = true;
                break;
            }
        }
        if (!pruned) {  // strict improvement: keeps the lexicographically first optimum
            best = worst;
            best_perm = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return {best, best_perm};
}

}  // namespace horokit
