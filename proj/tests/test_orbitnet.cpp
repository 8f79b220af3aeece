#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "horokit/errors.hpp"
#include "horokit/horolattice.hpp"
#include "horokit/orbitnet.hpp"
#include "test_util.hpp"

using namespace horokit;
using testutil::slurp;
using testutil::spit;
using testutil::tmp_path;

namespace {

// w -> w + 1 as a matrix row (the standard parabolic translation).
constexpr const char* kParabolicRow = "1,0,1,0,0,0,1,0\n";

std::string parabolic_file() {
    const std::string path = tmp_path("gens-parabolic.gens");
    spit(path, std::string("# horizontal translation\n\n") + kParabolicRow);
    return path;
}

}  // namespace

TEST_CASE("generator files parse, adjoin inverses, and deduplicate") {
    const GeneratorSet gens = load_generators(parabolic_file());
    CHECK(gens.source == parabolic_file());
    REQUIRE(gens.matrices.size() == 2);  // the translation and its inverse
    CHECK(gens.matrices[0] == SL2C{1.0, 1.0, 0.0, 1.0});
    CHECK(gens.matrices[1] == SL2C{1.0, -1.0, 0.0, 1.0});

    SUBCASE("explicit inverses do not duplicate") {
        const std::string path = tmp_path("gens-both.gens");
        spit(path, "1,0,1,0,0,0,1,0\n1,0,-1,0,0,0,1,0\n");
        CHECK(load_generators(path).matrices.size() == 2);
    }
    SUBCASE("self-inverse generators appear once") {
        const std::string path = tmp_path("gens-identity.gens");
        spit(path, "1,0,0,0,0,0,1,0\n");
        CHECK(load_generators(path).matrices.size() == 1);
    }
}

TEST_CASE("generator parse errors carry their line number") {
    const std::string path = tmp_path("gens-bad.gens");

    SUBCASE("wrong field count") {
        spit(path, "# ok\n1,0,1,0,0,0,1\n");
        CHECK_THROWS_WITH_AS(load_generators(path), doctest::Contains(":2"), ParseError);
    }
    SUBCASE("non-numeric field") {
        spit(path, "1,q,1,0,0,0,1,0\n");
        CHECK_THROWS_WITH_AS(load_generators(path), doctest::Contains(":1"), ParseError);
    }
    SUBCASE("determinant out of tolerance") {
        spit(path, "2,0,0,0,0,0,1,0\n");
        CHECK_THROWS_AS(load_generators(path), std::invalid_argument);
    }
    SUBCASE("no records") {
        spit(path, "# nothing here\n\n");
        CHECK_THROWS_AS(load_generators(path), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_generators(tmp_path("gens-missing.gens")), ParseError);
    }
}

TEST_CASE("a parabolic orbit is the integer translates of the basepoint") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const OrbitCloud orbit = enumerate_orbit(gens, HPoint(0, 0, 1), 3);
    REQUIRE(orbit.points.size() == 7);
    CHECK(orbit.points[0] == HPoint(0, 0, 1));  // basepoint first
    for (std::size_t i = 0; i < orbit.points.size(); ++i) {
        const HPoint& p = orbit.points[i];
        CHECK(p.y == 0.0);
        CHECK(p.z == 1.0);
        CHECK(p.x == std::round(p.x));
        CHECK(std::abs(p.x) <= 3.0);
        CHECK(orbit.word_length[i] == static_cast<std::int64_t>(std::abs(p.x)));
    }
}

TEST_CASE("orbit enumeration stops at word length zero") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const OrbitCloud orbit = enumerate_orbit(gens, HPoint(2, 3, 5), 0);
    CHECK(orbit.points.size() == 1);
    CHECK(orbit.points[0] == HPoint(2, 3, 5));
    CHECK(orbit.word_length == std::vector<std::int64_t>{0});
}

TEST_CASE("orbit merging collapses points within tolerance") {
    const GeneratorSet gens = load_generators(parabolic_file());
    OrbitOptions opts;
    opts.merge_tolerance = 10.0;  // swallows every candidate near the basepoint
    CHECK(enumerate_orbit(gens, HPoint(0, 0, 1), 5, opts).points.size() == 1);
    opts.merge_tolerance = 1e-9;
    CHECK(enumerate_orbit(gens, HPoint(0, 0, 1), 5, opts).points.size() == 11);
}

TEST_CASE("orbit enumeration enforces its point budget") {
    const GeneratorSet gens = load_generators(parabolic_file());
    OrbitOptions opts;
    opts.point_budget = 4;
    CHECK_THROWS_AS(enumerate_orbit(gens, HPoint(0, 0, 1), 3, opts), BudgetError);
}

TEST_CASE("deeper enumeration extends the shallow orbit without rewriting it") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const OrbitCloud shallow = enumerate_orbit(gens, HPoint(0, 0, 1), 2);
    const OrbitCloud deep = enumerate_orbit(gens, HPoint(0, 0, 1), 4);
    REQUIRE(deep.points.size() >= shallow.points.size());
    for (std::size_t i = 0; i < shallow.points.size(); ++i) {
        CHECK(deep.points[i] == shallow.points[i]);
        CHECK(deep.word_length[i] == shallow.word_length[i]);
    }
}

TEST_CASE("orbit csv lists coordinates with word lengths") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const OrbitCloud orbit = enumerate_orbit(gens, HPoint(0, 0, 1), 1);
    const std::string path = tmp_path("orbit.csv");
    write_orbit_csv(orbit, path);
    const std::string text = slurp(path);
    CHECK(text.rfind("x,y,z,word_length\n", 0) == 0);
    CHECK(text.find("\n0,0,1,0\n") != std::string::npos);
    CHECK(text.find(",1\n") != std::string::npos);
}

TEST_CASE("the distance scatter matches the closed form on a parabolic line") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const QIScatter scatter = qi_scatter(enumerate_orbit(gens, HPoint(0, 0, 1), 10));
    REQUIRE(scatter.pairs.size() == 21);
    for (const auto& [wl, d] : scatter.pairs) {
        const double k = static_cast<double>(wl);
        CHECK(d == acosh1p(k * k / 2.0));
    }
    // Linear word growth vs logarithmic distance growth: the full-depth fit
    // needs a visibly larger multiplicative constant than the half-depth fit.
    CHECK(scatter.fit_full.lambda >= scatter.fit_half.lambda);
    CHECK(qi_scatter(enumerate_orbit(gens, HPoint(0, 0, 1), 20)).qi_suspect);
    CHECK_FALSE(qi_scatter(enumerate_orbit(gens, HPoint(0, 0, 1), 3)).qi_suspect);
}

TEST_CASE("the two-sided fit sandwiches every scatter point") {
    const GeneratorSet gens = load_generators(parabolic_file());
    const QIScatter scatter = qi_scatter(enumerate_orbit(gens, HPoint(0, 0, 1), 12));
    const double lambda = scatter.fit_full.lambda, eps = scatter.fit_full.epsilon;
    CHECK(lambda >= 1.0);
    CHECK(eps >= 0.0);
    for (const auto& [wl, d] : scatter.pairs) {
        const double w = static_cast<double>(wl);
        CHECK(d <= lambda * w + eps + 1e-12);
        CHECK(d >= w / lambda - eps - 1e-12);
    }
}

TEST_CASE("horoband membership is a symmetric log-height window") {
    const HoroBand band(1.0, 0.1);
    CHECK(band.contains(HPoint(3, -2, 1.0)));
    CHECK(band.contains(HPoint(0, 0, 1.09)));
    CHECK(band.contains(HPoint(0, 0, std::exp(0.0999))));
    CHECK(band.contains(HPoint(0, 0, std::exp(-0.0999))));
    CHECK_FALSE(band.contains(HPoint(0, 0, 1.2)));
    CHECK_FALSE(band.contains(HPoint(0, 0, 0.8)));

    // Exact boundary: ln 2 is computed identically on both sides of <=.
    const HoroBand octave(1.0, std::log(2.0));
    CHECK(octave.contains(HPoint(0, 0, 2.0)));
    CHECK(octave.contains(HPoint(0, 0, 0.5)));
    CHECK_FALSE(octave.contains(HPoint(0, 0, 2.001)));

    const HoroBand shifted(2.0, 0.1);
    CHECK(shifted.contains(HPoint(0, 0, 2.0)));
    CHECK_FALSE(shifted.contains(HPoint(0, 0, 1.0)));

    CHECK_THROWS_AS(HoroBand(0.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(HoroBand(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(HoroBand(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("band intersection keeps orbit order and filters by height") {
    // Window cloud spans heights 1/2, 1, 2; the unit band keeps one level.
    const LatticeWindow win(2, 1);
    OrbitCloud fake;
    fake.points = win.to_cloud();
    fake.word_length.assign(win.size(), 0);
    const PointCloud band_cloud = horoband_intersect(fake, HoroBand(1.0, 0.1));
    CHECK(band_cloud.size() == 25);
    for (std::size_t i = 0; i < band_cloud.size(); ++i) CHECK(band_cloud[i].z == 1.0);
    CHECK(band_cloud.label().find("-band") != std::string::npos);

    const std::vector<std::size_t> idx = band_member_indices(fake.points, HoroBand(1.0, 0.1));
    CHECK(idx.size() == 25);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
}

TEST_CASE("the graph metric sums shortest paths through the band") {
    const PointCloud chain("chain", {HPoint(0, 0, 1), HPoint(1, 0, 1), HPoint(2, 0, 1)});
    const GraphMetric m = band_graph_metric(chain, 1.0);
    REQUIRE(m.size() == 3);
    CHECK(m.connected());
    CHECK(m.edge_count() == 2);  // the direct 0-2 hop exceeds the threshold
    const double step = acosh1p(0.5);
    CHECK(m(0, 0) == 0.0);
    CHECK(m(0, 1) == step);
    CHECK(m(0, 2) == doctest::Approx(2.0 * step).epsilon(1e-15));
    CHECK(m(0, 2) > dist(chain[0], chain[2]));  // strictly longer than the geodesic
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(m(i, j) == m(j, i));
}

TEST_CASE("the graph metric flags disconnected clouds") {
    const PointCloud pair("pair", {HPoint(0, 0, 1), HPoint(9, 0, 1)});
    const GraphMetric m = band_graph_metric(pair, 1.0);
    CHECK_FALSE(m.connected());
    CHECK(m.edge_count() == 0);
    CHECK(GraphMetric::unreachable(m(0, 1)));
    CHECK_FALSE(GraphMetric::unreachable(m(0, 0)));
}

TEST_CASE("graph distances dominate ambient distances") {
    const PointCloud cloud = LatticeWindow(2, 0).to_cloud();
    const GraphMetric m = band_graph_metric(cloud, 1.4);
    REQUIRE(m.connected());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = 0; j < cloud.size(); ++j)
            CHECK(m(i, j) >= dist(cloud[i], cloud[j]) - 1e-12);
}

TEST_CASE("the graph metric validates threshold and node budget") {
    const PointCloud chain("chain3", {HPoint(0, 0, 1), HPoint(1, 0, 1), HPoint(2, 0, 1)});
    CHECK_THROWS_AS(band_graph_metric(chain, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(band_graph_metric(chain, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(band_graph_metric(chain, 1.0, 2), BudgetError);
}

TEST_CASE("grid comparison is exact on a flat dyadic slab") {
    // 7 x 7 unit-height slab: the band IS a grid, so the comparison must come
    // back clean: zero bottleneck, identity pairing, unit constants.
    const PointCloud slab = LatticeWindow(3, 0).to_cloud();
    const GraphMetric metric = band_graph_metric(slab, 1.0);
    REQUIRE(metric.connected());

    GridCompareOptions opts;
    opts.k = 7;
    const GridCompareReport rep = grid_compare(slab, metric, opts);
    CHECK(rep.k == 7);
    CHECK(rep.used_points == 49);
    CHECK(rep.plane_height == 1.0);
    CHECK(rep.unit == acosh1p(0.5));  // median nearest-neighbor gap = one grid step
    CHECK(rep.graph_connected);
    CHECK(rep.bottleneck_radius == 0.0);
    CHECK(rep.lip_forward == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.lip_inverse == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(rep.kept.size() == 49);
    for (std::size_t p = 0; p < rep.pairing.size(); ++p) CHECK(rep.pairing[p] == p);
}

TEST_CASE("grid comparison auto-selects the largest full square") {
    const PointCloud slab = LatticeWindow(3, 0).to_cloud();  // 49 points
    const GraphMetric metric = band_graph_metric(slab, 1.0);
    const GridCompareReport rep = grid_compare(slab, metric);
    CHECK(rep.k == 7);

    // Drop one point: 48 points should fall back to a 6 x 6 comparison.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i + 1 < slab.size(); ++i) keep.push_back(i);
    const PointCloud smaller = slab.subset(keep, "slab-minus-one");
    const GraphMetric metric2 = band_graph_metric(smaller, 1.0);
    CHECK(grid_compare(smaller, metric2).k == 6);
}

TEST_CASE("grid comparison reports disconnection instead of constants") {
    const PointCloud slab = LatticeWindow(2, 0).to_cloud();
    const GraphMetric sparse = band_graph_metric(slab, 0.5);  // below the grid step
    REQUIRE_FALSE(sparse.connected());
    const GridCompareReport rep = grid_compare(slab, sparse);
    CHECK_FALSE(rep.graph_connected);
    CHECK(rep.bottleneck_radius == 0.0);  // untouched defaults
}

TEST_CASE("grid comparison rejects degenerate and ill-sized inputs") {
    const PointCloud slab = LatticeWindow(2, 0).to_cloud();
    const GraphMetric metric = band_graph_metric(slab, 1.0);

    GridCompareOptions too_big;
    too_big.k = 6;
    CHECK_THROWS_AS(grid_compare(slab, metric, too_big), std::invalid_argument);
    GridCompareOptions too_small;
    too_small.k = 1;
    CHECK_THROWS_AS(grid_compare(slab, metric, too_small), std::invalid_argument);

    const PointCloud other = LatticeWindow(3, 0).to_cloud();
    CHECK_THROWS_AS(grid_compare(other, metric), std::invalid_argument);

    // A collinear band has no planar spread to anchor a reference grid.
    const PointCloud line("line4",
                          {HPoint(0, 0, 1), HPoint(1, 0, 1), HPoint(2, 0, 1), HPoint(3, 0, 1)});
    const GraphMetric line_metric = band_graph_metric(line, 1.0);
    CHECK_THROWS_WITH_AS(grid_compare(line, line_metric), doctest::Contains("degenerate"),
                         std::invalid_argument);
}
