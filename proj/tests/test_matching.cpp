#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "horokit/horolattice.hpp"
#include "horokit/matching.hpp"
#include "horokit/rng.hpp"

using namespace horokit;

namespace {

PointCloud random_cloud(std::size_t n, SplitMix64& rng) {
    std::vector<HPoint> pts;
    while (pts.size() < n) {
        const HPoint p(rng.uniform(-2, 2), rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
        bool dup = false;
        for (const HPoint& q : pts) dup = dup || (p == q);
        if (!dup) pts.push_back(p);
    }
    return PointCloud("cloud", std::move(pts));
}

// Independent maximum-matching oracle: single augmenting-path search (Kuhn).
std::size_t kuhn_matching_size(const DisplacementGraph& g) {
    std::vector<std::ptrdiff_t> match_right(g.n_right, -1);
    std::vector<char> used;
    std::function<bool(std::size_t)> try_augment = [&](std::size_t u) -> bool {
        for (std::size_t v : g.adj[u]) {
            if (used[v]) continue;
            used[v] = 1;
            if (match_right[v] < 0 || try_augment(static_cast<std::size_t>(match_right[v]))) {
                match_right[v] = static_cast<std::ptrdiff_t>(u);
                return true;
            }
        }
        return false;
    };
    std::size_t size = 0;
    for (std::size_t u = 0; u < g.n_left; ++u) {
        used.assign(g.n_right, 0);
        if (try_augment(u)) ++size;
    }
    return size;
}

DisplacementGraph random_graph(SplitMix64& rng, std::size_t nl, std::size_t nr,
                               double density) {
    // Random 0/1 cross metric realized through distances: edge iff draw < density.
    std::vector<std::vector<char>> has(nl, std::vector<char>(nr, 0));
    for (auto& row : has)
        for (auto& cell : row) cell = rng.next_double() < density ? 1 : 0;
    const CrossDist cross = [has](std::size_t i, std::size_t j) {
        return has[i][j] ? 0.5 : 2.0;
    };
    return DisplacementGraph::build(nl, nr, cross, 1.0);
}

}  // namespace

TEST_CASE("displacement graphs keep edges within threshold, ascending") {
    const PointCloud left("l", {HPoint(0, 0, 1), HPoint(1, 0, 1)});
    const PointCloud right("r", {HPoint(0, 0, 1), HPoint(0, 0, 2), HPoint(5, 5, 1)});
    const DisplacementGraph g =
        DisplacementGraph::build(left.size(), right.size(), ambient_cross(left, right), 1.0);
    REQUIRE(g.adj.size() == 2);
    CHECK(g.adj[0] == std::vector<std::size_t>{0, 1});  // dist 0 and ln 2
    CHECK(g.adj[1] == std::vector<std::size_t>{0, 1});  // arccosh(3/2) both ways
    for (const auto& row : g.adj) CHECK(std::is_sorted(row.begin(), row.end()));
}

TEST_CASE("maximum matching size equals an augmenting-path oracle") {
    SplitMix64 rng(41);
    for (int t = 0; t < 60; ++t) {
        const std::size_t nl = 1 + rng.next_below(12), nr = 1 + rng.next_below(12);
        const DisplacementGraph g = random_graph(rng, nl, nr, 0.3);
        const MatchingResult res = max_matching(g);
        CHECK(res.size == kuhn_matching_size(g));

        // Structural consistency of the two direction maps.
        std::size_t matched = 0;
        for (std::size_t u = 0; u < nl; ++u) {
            if (res.left_to_right[u] < 0) continue;
            ++matched;
            const auto v = static_cast<std::size_t>(res.left_to_right[u]);
            CHECK(res.right_to_left[v] == static_cast<std::ptrdiff_t>(u));
            CHECK(std::find(g.adj[u].begin(), g.adj[u].end(), v) != g.adj[u].end());
        }
        CHECK(matched == res.size);
    }
}

TEST_CASE("a deficient graph yields a verifiable Hall violator") {
    SplitMix64 rng(42);
    int deficient_seen = 0;
    for (int t = 0; t < 80; ++t) {
        const std::size_t nl = 2 + rng.next_below(10), nr = 2 + rng.next_below(10);
        const DisplacementGraph g = random_graph(rng, nl, nr, 0.25);
        const MatchingResult res = max_matching(g);
        const auto violator = hall_violator(g);
        if (res.size == g.n_left) {
            CHECK_FALSE(violator.has_value());
            continue;
        }
        ++deficient_seen;
        REQUIRE(violator.has_value());
        CHECK(std::is_sorted(violator->begin(), violator->end()));
        // Recount the neighborhood from scratch: |N(S)| < |S| must hold.
        std::set<std::size_t> nbhd;
        for (std::size_t u : *violator) {
            CHECK(u < g.n_left);
            nbhd.insert(g.adj[u].begin(), g.adj[u].end());
        }
        CHECK(nbhd.size() < violator->size());
    }
    CHECK(deficient_seen > 10);  // the sweep actually exercised the deficient branch
}

TEST_CASE("bottleneck bijection matches factorial enumeration on random instances") {
    SplitMix64 rng(43);
    for (int t = 0; t < 25; ++t) {
        const std::size_t n = 2 + rng.next_below(6);  // 2..7
        const PointCloud left = random_cloud(n, rng);
        const PointCloud right = random_cloud(n, rng);
        const BottleneckBijection bb = bottleneck_bijection(left, right);
        const auto [best, perm] = bottleneck_exhaustive(n, ambient_cross(left, right));
        CHECK(bb.bottleneck == best);

        // The reported value is realized by the reported pairing.
        double realized = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            realized = std::max(realized, dist(left[i], right[bb.pairing[i]]));
        CHECK(realized == bb.bottleneck);
    }
}

TEST_CASE("identical clouds match at bottleneck zero with unit constants") {
    const PointCloud cloud = LatticeWindow(2, 1).to_cloud();
    const BottleneckBijection bb = bottleneck_bijection(cloud, cloud);
    CHECK(bb.bottleneck == 0.0);
    CHECK(bb.lip_forward == 1.0);
    CHECK(bb.lip_inverse == 1.0);
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(bb.pairing[i] == i);
}

TEST_CASE("single-point clouds match at their pair distance") {
    const PointCloud a("a", {HPoint(0, 0, 1)});
    const PointCloud b("b", {HPoint(3, 0, 1)});
    const BottleneckBijection bb = bottleneck_bijection(a, b);
    CHECK(bb.pairing == std::vector<std::size_t>{0});
    CHECK(bb.bottleneck == dist(a[0], b[0]));
    CHECK(bb.lip_forward == 1.0);  // vacuous: no distinct pairs
}

TEST_CASE("bottleneck matching validates cardinalities") {
    const PointCloud a("a", {HPoint(0, 0, 1)});
    const PointCloud b("b", {HPoint(1, 0, 1), HPoint(2, 0, 1)});
    CHECK_THROWS_AS(bottleneck_bijection(a, b), std::invalid_argument);
    CHECK_THROWS_AS(bottleneck_bijection(PointCloud{}, PointCloud{}), std::invalid_argument);
    CHECK_THROWS_AS(bottleneck_exhaustive(11, ambient_cross(a, a)), std::invalid_argument);
}

TEST_CASE("the exhaustive oracle prefers the lexicographically first optimum") {
    // Two optimal permutations exist by symmetry; enumeration order must pick
    // the first one deterministically.
    const CrossDist cross = [](std::size_t, std::size_t) { return 1.0; };
    const auto [best, perm] = bottleneck_exhaustive(3, cross);
    CHECK(best == 1.0);
    CHECK(perm == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("Lipschitz constants recover a metric scale factor") {
    // Five labelled sites with a planar metric on the left and three times
    // the same metric on the right, matched by the identity pairing.
    std::vector<std::pair<double, double>> site = {
        {0, 0}, {1, 0}, {0, 1}, {2, 2}, {-1, 3}};
    const CrossDist dl = [site](std::size_t i, std::size_t j) {
        return std::hypot(site[i].first - site[j].first, site[i].second - site[j].second);
    };
    const CrossDist dr = [dl](std::size_t i, std::size_t j) { return 3.0 * dl(i, j); };
    const std::vector<std::size_t> pairing = {0, 1, 2, 3, 4};
    const LipschitzConstants lc = lipschitz_constants(pairing, dl, dr);
    CHECK(lc.exhaustive);
    CHECK(lc.pairs == 10);
    CHECK(lc.forward == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lc.inverse == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Swapping the sides swaps the roles of the two constants.
    const LipschitzConstants swapped = lipschitz_constants(pairing, dr, dl);
    CHECK(swapped.forward == lc.inverse);
    CHECK(swapped.inverse == lc.forward);
}

TEST_CASE("Lipschitz constants reject zero distances between distinct points") {
    const CrossDist zero = [](std::size_t, std::size_t) { return 0.0; };
    const CrossDist one = [](std::size_t, std::size_t) { return 1.0; };
    const std::vector<std::size_t> pairing = {0, 1};
    CHECK_THROWS_AS(lipschitz_constants(pairing, zero, one), std::invalid_argument);
    CHECK_THROWS_AS(lipschitz_constants(pairing, one, zero), std::invalid_argument);
}

TEST_CASE("degenerate pairings give vacuous unit constants") {
    const CrossDist one = [](std::size_t, std::size_t) { return 1.0; };
    const std::vector<std::size_t> single = {0};
    const LipschitzConstants lc = lipschitz_constants(single, one, one);
    CHECK(lc.forward == 1.0);
    CHECK(lc.inverse == 1.0);
    CHECK(lc.pairs == 0);
}

TEST_CASE("sampled Lipschitz estimation is seed-stable and bounded by the exhaustive value") {
    SplitMix64 rng(44);
    const PointCloud left = random_cloud(60, rng);
    const PointCloud right = random_cloud(60, rng);
    std::vector<std::size_t> pairing(60);
    for (std::size_t i = 0; i < 60; ++i) pairing[i] = i;

    const CrossDist dl = ambient_cross(left, left);
    const CrossDist dr = ambient_cross(right, right);
    const LipschitzConstants full = lipschitz_constants(pairing, dl, dr);
    REQUIRE(full.exhaustive);

    LipschitzOptions opts;
    opts.exhaustive_cap = 10;  // force the sampled path
    opts.min_samples = 2000;
    opts.seed = 17;
    const LipschitzConstants s1 = lipschitz_constants(pairing, dl, dr, opts);
    const LipschitzConstants s2 = lipschitz_constants(pairing, dl, dr, opts);
    CHECK_FALSE(s1.exhaustive);
    CHECK(s1.forward == s2.forward);
    CHECK(s1.inverse == s2.inverse);
    CHECK(s1.pairs == s2.pairs);
    CHECK(s1.forward <= full.forward);
    CHECK(s1.inverse <= full.inverse);
}
