#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "horokit/cloud.hpp"
#include "horokit/errors.hpp"
#include "test_util.hpp"

using namespace horokit;
using testutil::slurp;
using testutil::spit;
using testutil::tmp_path;

TEST_CASE("cloud construction rejects bitwise-duplicate points") {
    CHECK_THROWS_AS(PointCloud("dup", {HPoint(1, 2, 3), HPoint(1, 2, 3)}),
                    std::invalid_argument);
    const PointCloud ok("near-dup", {HPoint(1, 2, 3), HPoint(1, 2, 3.0000000000000004)});
    CHECK(ok.size() == 2);
    CHECK(ok.label() == "near-dup");
}

TEST_CASE("cloud csv round-trips doubles exactly") {
    const std::vector<HPoint> pts = {
        HPoint(0.1, -0.1, 1.0),
        HPoint(1.0 / 3.0, 2.0 / 3.0, std::ldexp(1.0, -40)),
        HPoint(1e300, -1e300, 1e-300),
        HPoint(0.0, -0.0, 2.2250738585072014e-308),
        HPoint(123456789.123456789, -3.141592653589793, 42.0),
    };
    const PointCloud cloud("roundtrip", pts);
    const std::string path = tmp_path("cloud-roundtrip.csv");
    write_cloud_csv(cloud, path);
    const PointCloud back = read_cloud_csv(path, "roundtrip");
    REQUIRE(back.size() == cloud.size());
    CHECK(back.label() == "roundtrip");
    for (std::size_t i = 0; i < cloud.size(); ++i) CHECK(back[i] == cloud[i]);
}

TEST_CASE("cloud csv parse errors carry file and line positions") {
    const std::string path = tmp_path("cloud-bad.csv");

    SUBCASE("wrong header") {
        spit(path, "a,b,c\n1,2,3\n");
        CHECK_THROWS_WITH_AS(read_cloud_csv(path), doctest::Contains(":1"), ParseError);
    }
    SUBCASE("wrong field count") {
        spit(path, "x,y,z\n1,2\n");
        CHECK_THROWS_WITH_AS(read_cloud_csv(path), doctest::Contains(":2"), ParseError);
    }
    SUBCASE("non-numeric field") {
        spit(path, "x,y,z\n1,2,3\n1,zebra,3\n");
        CHECK_THROWS_WITH_AS(read_cloud_csv(path), doctest::Contains(":3"), ParseError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(read_cloud_csv(tmp_path("does-not-exist.csv")), ParseError);
    }
}

TEST_CASE("subset keeps the requested order") {
    const PointCloud cloud("base", {HPoint(0, 0, 1), HPoint(1, 0, 1), HPoint(2, 0, 1),
                                    HPoint(3, 0, 1)});
    const std::vector<std::size_t> idx = {3, 0, 2};
    const PointCloud sub = cloud.subset(idx, "picked");
    REQUIRE(sub.size() == 3);
    CHECK(sub.label() == "picked");
    CHECK(sub[0] == cloud[3]);
    CHECK(sub[1] == cloud[0]);
    CHECK(sub[2] == cloud[2]);
    CHECK_THROWS_AS(cloud.subset(std::vector<std::size_t>{4}, "oob"), std::invalid_argument);
}

TEST_CASE("trimming drops the rim before the middle") {
    // Seven collinear points; the centroid sits at x = 3, so trimming to
    // three keeps x in {2, 3, 4}.
    std::vector<HPoint> pts;
    for (int i = 0; i <= 6; ++i) pts.emplace_back(double(i), 0.0, 1.0);
    const PointCloud cloud("line", pts);

    const std::vector<std::size_t> keep = trim_keep_indices(cloud, 3);
    CHECK(keep == std::vector<std::size_t>{2, 3, 4});

    CHECK(trim_keep_indices(cloud, cloud.size()).size() == cloud.size());
    CHECK_THROWS_AS(trim_keep_indices(cloud, cloud.size() + 1), std::invalid_argument);
}

TEST_CASE("trimming measures spread in log-height coordinates") {
    // Heights 1/4 and 4 are equally far from the height-1 centroid in ln z;
    // the widest outlier in x goes first regardless of its modest height.
    const PointCloud cloud("mixed", {HPoint(0, 0, 0.25), HPoint(0, 0, 1), HPoint(0, 0, 4),
                                     HPoint(9, 0, 1)});
    const std::vector<std::size_t> keep = trim_keep_indices(cloud, 3);
    CHECK(keep == std::vector<std::size_t>{0, 1, 2});
}
