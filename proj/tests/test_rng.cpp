#include <doctest.h>

#include <cstdint>
#include <vector>

#include "horokit/rng.hpp"

using namespace horokit;

namespace {

std::vector<std::uint64_t> take(SplitMix64 rng, int n) {
    std::vector<std::uint64_t> out;
    for (int i = 0; i < n; ++i) out.push_back(rng.next());
    return out;
}

}  // namespace

TEST_CASE("named child streams are reproducible and independent") {
    CHECK(take(child_rng(1, "covering"), 8) == take(child_rng(1, "covering"), 8));
    CHECK(take(child_rng(1, "covering"), 8) != take(child_rng(1, "perturb"), 8));
    CHECK(take(child_rng(1, "covering", 0), 8) != take(child_rng(1, "covering", 1), 8));
    CHECK(take(child_rng(1, "covering"), 8) != take(child_rng(2, "covering"), 8));
}

TEST_CASE("uniform draws stay inside their interval") {
    SplitMix64 rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_double();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 10000; ++i) {
        const double v = rng.uniform(-3.0, 7.0);
        CHECK(v >= -3.0);
        CHECK(v < 7.0);
    }
}

TEST_CASE("bounded integer draws have no out-of-range values") {
    SplitMix64 rng(7);
    for (int i = 0; i < 10000; ++i) CHECK(rng.next_below(13) < 13);
    for (int i = 0; i < 100; ++i) CHECK(rng.next_below(1) == 0);
}

TEST_CASE("the string hash matches the published reference vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}
