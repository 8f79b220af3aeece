#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "horokit/errors.hpp"
#include "horokit/hyp3.hpp"
#include "horokit/rng.hpp"

using namespace horokit;

namespace {

HPoint random_point(SplitMix64& rng) {
    return HPoint(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0),
                  std::exp(rng.uniform(-1.5, 1.5)));
}

}  // namespace

TEST_CASE("point construction rejects non-positive heights and non-finite coordinates") {
    CHECK_THROWS_AS(HPoint(0.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(0.0, 0.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(std::nan(""), 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(0.0, INFINITY, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(0.0, 0.0, INFINITY), std::invalid_argument);
    CHECK_NOTHROW(HPoint(1e8, -1e8, 1e-12));
}

TEST_CASE("distance is symmetric and vanishes exactly on equal points") {
    SplitMix64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const HPoint p = random_point(rng), q = random_point(rng);
        CHECK(dist(p, q) == dist(q, p));
        CHECK(dist(p, p) == 0.0);
        if (!(p == q)) CHECK(dist(p, q) > 0.0);
    }
}

TEST_CASE("vertical segments have logarithmic length") {
    CHECK(dist(HPoint(0, 0, 1), HPoint(0, 0, 2)) == std::log(2.0));
    CHECK(dist(HPoint(0, 0, 2), HPoint(0, 0, 1)) == std::log(2.0));
    CHECK(dist(HPoint(5, -3, 0.25), HPoint(5, -3, 0.5)) == std::log(2.0));
    SplitMix64 rng(12);
    for (int t = 0; t < 100; ++t) {
        const double a = std::exp(rng.uniform(-2, 2)), b = std::exp(rng.uniform(-2, 2));
        CHECK(dist(HPoint(1, 2, a), HPoint(1, 2, b)) ==
              doctest::Approx(std::abs(std::log(b / a))).epsilon(1e-12));
    }
}

TEST_CASE("unit horizontal step at unit height has length arccosh(3/2)") {
    const double d = dist(HPoint(0, 0, 1), HPoint(1, 0, 1));
    CHECK(d == acosh1p(0.5));
    CHECK(d == doctest::Approx(std::acosh(1.5)).epsilon(1e-15));
    CHECK(d == doctest::Approx(0.9624236501192069).epsilon(1e-15));
}

TEST_CASE("acosh1p is exact at zero and stable for tiny arguments") {
    CHECK(acosh1p(0.0) == 0.0);
    // Leading term of arccosh(1+u) is sqrt(2u); the naive acos form loses it.
    for (double u : {1e-12, 1e-15, 1e-18}) {
        CHECK(acosh1p(u) == doctest::Approx(std::sqrt(2.0 * u)).epsilon(1e-9));
        CHECK(acosh1p(u) > 0.0);
    }
    CHECK(acosh1p(0.5) == doctest::Approx(std::acosh(1.5)).epsilon(1e-15));
}

TEST_CASE("distance obeys the triangle inequality on random triples") {
    SplitMix64 rng(13);
    for (int t = 0; t < 300; ++t) {
        const HPoint p = random_point(rng), q = random_point(rng), r = random_point(rng);
        CHECK(dist(p, r) <= dist(p, q) + dist(q, r) + 1e-12);
    }
}

TEST_CASE("dilation about the boundary origin is an isometry") {
    SplitMix64 rng(14);
    for (double lambda : {0.125, 0.7, 2.0, 16.0}) {
        for (int t = 0; t < 50; ++t) {
            const HPoint p = random_point(rng), q = random_point(rng);
            CHECK(dist(dilate(lambda, p), dilate(lambda, q)) ==
                  doctest::Approx(dist(p, q)).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(dilate(0.0, HPoint(0, 0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(dilate(-2.0, HPoint(0, 0, 1)), std::invalid_argument);
}

TEST_CASE("Moebius translation shifts the horizontal plane exactly") {
    const SL2C t{1.0, 1.0, 0.0, 1.0};  // w -> w + 1
    const HPoint p(0.5, -2.0, 3.0);
    const HPoint q = mobius_apply(t, p);
    CHECK(q.x == 1.5);
    CHECK(q.y == -2.0);
    CHECK(q.z == 3.0);
}

TEST_CASE("Moebius inversion fixes the unit-height pole") {
    const SL2C s{0.0, -1.0, 1.0, 0.0};  // w -> -1/w
    const HPoint pole(0, 0, 1);
    const HPoint q = mobius_apply(s, pole);
    CHECK(q.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.y == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(q.z == doctest::Approx(1.0).epsilon(1e-15));
    // Height inverts on the vertical axis: (0,0,4) -> (0,0,1/4).
    CHECK(mobius_apply(s, HPoint(0, 0, 4)).z == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("unimodular Moebius maps preserve distances") {
    const SL2C t{1.0, 1.0, 0.0, 1.0};
    const SL2C s{0.0, -1.0, 1.0, 0.0};
    const SL2C g = t * s * t * t * s;  // det 1 by construction
    CHECK(g.is_unimodular(kDetTolerance));
    SplitMix64 rng(15);
    for (int i = 0; i < 100; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng);
        CHECK(dist(mobius_apply(g, p), mobius_apply(g, q)) ==
              doctest::Approx(dist(p, q)).epsilon(1e-11));
    }
}

TEST_CASE("matrix inverse is the exact adjugate") {
    const SL2C t{1.0, 1.0, 0.0, 1.0};
    const SL2C s{0.0, -1.0, 1.0, 0.0};
    const SL2C g = s * t * s;
    const SL2C id{};
    CHECK(g * g.inverse() == id);
    CHECK(g.inverse() * g == id);
    SplitMix64 rng(16);
    for (int i = 0; i < 50; ++i) {
        const HPoint p = random_point(rng);
        const HPoint back = mobius_apply(g.inverse(), mobius_apply(g, p));
        CHECK(back.x == doctest::Approx(p.x).epsilon(1e-10));
        CHECK(back.y == doctest::Approx(p.y).epsilon(1e-10));
        CHECK(back.z == doctest::Approx(p.z).epsilon(1e-10));
    }
}

TEST_CASE("determinant classifies unimodularity") {
    CHECK(SL2C{}.det() == std::complex<double>(1.0));
    const SL2C scale{2.0, 0.0, 0.0, 1.0};
    CHECK(scale.det() == std::complex<double>(2.0));
    CHECK_FALSE(scale.is_unimodular(kDetTolerance));
    CHECK(scale.is_unimodular(1.5));
}

TEST_CASE("degenerate Moebius evaluations are rejected") {
    const SL2C singular{1.0, 0.0, 0.0, 0.0};  // det 0: denominator vanishes on the axis
    CHECK_THROWS_AS(mobius_apply(singular, HPoint(0, 0, 1)), DegenerateTransformError);
}
