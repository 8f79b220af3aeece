#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "horokit/cloud.hpp"
#include "horokit/horolattice.hpp"
#include "horokit/hyp3.hpp"
#include "horokit/matching.hpp"
#include "horokit/orbitnet.hpp"
#include "horokit/tla.hpp"
#include "horokit/udbg.hpp"

namespace py = pybind11;
using namespace horokit;

PYBIND11_MODULE(_core, m) {
    m.doc() = "dyadic horolattice verification core";

    py::class_<HPoint>(m, "HPoint")
        .def(py::init<double, double, double>(), py::arg("x"), py::arg("y"), py::arg("z"))
        .def_readonly("x", &HPoint::x)
        .def_readonly("y", &HPoint::y)
        .def_readonly("z", &HPoint::z)
        .def("__repr__", [](const HPoint& p) {
            return "HPoint(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " +
                   std::to_string(p.z) + ")";
        });
    m.def("dist", &dist, "hyperbolic distance in the upper half-space model");
    m.def("acosh1p", &acosh1p);
    m.def("dilate", &dilate);

    py::class_<SL2C>(m, "SL2C")
        .def(py::init<std::complex<double>, std::complex<double>, std::complex<double>,
                      std::complex<double>>(),
             py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_readonly("a", &SL2C::a)
        .def_readonly("b", &SL2C::b)
        .def_readonly("c", &SL2C::c)
        .def_readonly("d", &SL2C::d)
        .def("det", &SL2C::det)
        .def("inverse", &SL2C::inverse)
        .def("__mul__", [](const SL2C& g, const SL2C& h) { return g * h; });
    m.def("mobius_apply", &mobius_apply);

    py::class_<LatticeCoord>(m, "LatticeCoord")
        .def(py::init([](std::int64_t a, std::int64_t b, std::int64_t c) {
                 return LatticeCoord{a, b, c};
             }),
             py::arg("a"), py::arg("b"), py::arg("c"))
        .def_readonly("a", &LatticeCoord::a)
        .def_readonly("b", &LatticeCoord::b)
        .def_readonly("c", &LatticeCoord::c);
    py::class_<GridVector>(m, "GridVector")
        .def(py::init([](std::int64_t mm, std::int64_t nn) { return GridVector{mm, nn}; }),
             py::arg("m"), py::arg("n"))
        .def_readonly("m", &GridVector::m)
        .def_readonly("n", &GridVector::n);
    m.def("embed", &embed, py::arg("coord"), py::arg("max_level") = kDefaultMaxLevel);
    m.def("act", &act);
    m.def("displacement", &displacement);

    py::class_<PointCloud>(m, "PointCloud")
        .def(py::init<std::string, std::vector<HPoint>>(), py::arg("label"), py::arg("points"))
        .def_property_readonly("label", &PointCloud::label)
        .def("point", [](const PointCloud& c, std::size_t i) { return c[i]; })
        .def("points", &PointCloud::points)
        .def("__len__", &PointCloud::size);
    m.def("read_cloud_csv", &read_cloud_csv, py::arg("path"), py::arg("label") = "");
    m.def("write_cloud_csv", &write_cloud_csv);

    py::class_<LatticeWindow>(m, "LatticeWindow")
        .def(py::init<std::int64_t, std::int64_t, std::size_t>(), py::arg("A"), py::arg("C"),
             py::arg("point_budget") = 1'000'000)
        .def_property_readonly("A", &LatticeWindow::horizontal_bound)
        .def_property_readonly("C", &LatticeWindow::level_bound)
        .def("__len__", &LatticeWindow::size)
        .def("to_cloud", &LatticeWindow::to_cloud);

    m.def("min_pairwise_distance", [](const PointCloud& cloud) {
        const MinDistanceResult r = min_pairwise_distance(cloud);
        return py::make_tuple(r.value, r.i, r.j);
    });

    py::class_<GrowthProfile>(m, "GrowthProfile")
        .def_readonly("radii", &GrowthProfile::radii)
        .def_readonly("counts", &GrowthProfile::counts)
        .def_readonly("centers_used", &GrowthProfile::centers_used);
    m.def(
        "ball_profile",
        [](const PointCloud& cloud, std::vector<double> radii) {
            return ball_profile(cloud, std::move(radii), CenterStrategy::all());
        },
        py::arg("cloud"), py::arg("radii"));
    m.def("growth_slope", &growth_slope, py::arg("profile"), py::arg("r_lo"), py::arg("r_hi"));

    m.def(
        "covering_radius_interior",
        [](const PointCloud& cloud, std::int64_t A, std::int64_t C, std::int64_t margin,
           std::int64_t samples, std::uint64_t seed) {
            const CoveringResult r =
                covering_radius(cloud, interior_region(A, C, margin), samples, seed);
            return py::make_tuple(r.radius, r.worst);
        },
        py::arg("cloud"), py::arg("A"), py::arg("C"), py::arg("margin"), py::arg("samples"),
        py::arg("seed"));
    m.def(
        "covering_radius_box",
        [](const PointCloud& cloud, double xy_bound, double z_lo, double z_hi,
           std::int64_t samples, std::uint64_t seed) {
            const CoveringResult r =
                covering_radius(cloud, BoxRegion{xy_bound, xy_bound, z_lo, z_hi}, samples, seed);
            return py::make_tuple(r.radius, r.worst);
        },
        py::arg("cloud"), py::arg("xy_bound"), py::arg("z_lo"), py::arg("z_hi"),
        py::arg("samples"), py::arg("seed"));

    py::class_<BottleneckBijection>(m, "BottleneckBijection")
        .def_readonly("pairing", &BottleneckBijection::pairing)
        .def_readonly("bottleneck", &BottleneckBijection::bottleneck)
        .def_readonly("lip_forward", &BottleneckBijection::lip_forward)
        .def_readonly("lip_inverse", &BottleneckBijection::lip_inverse);
    m.def(
        "bottleneck_bijection",
        [](const PointCloud& left, const PointCloud& right) {
            return bottleneck_bijection(left, right);
        },
        py::arg("left"), py::arg("right"));

    py::class_<FiniteAction>(m, "FiniteAction")
        .def_property_readonly("carrier", &FiniteAction::carrier)
        .def("__len__", &FiniteAction::size)
        .def("apply_word", &FiniteAction::apply_word, py::arg("i"), py::arg("m"), py::arg("n"));
    m.def("make_dyadic_action", &make_dyadic_action);
    m.def(
        "translation_certificate_json",
        [](const FiniteAction& action, std::int64_t K) {
            return verify_translation_like(action, K).to_json().dump();
        },
        py::arg("action"), py::arg("K"));
    m.def("orbit_component_sizes", [](const FiniteAction& action) {
        std::vector<std::size_t> sizes;
        for (const OrbitComponent& c : orbit_partition(action).components)
            sizes.push_back(c.members.size());
        return sizes;
    });

    py::class_<GeneratorSet>(m, "GeneratorSet")
        .def_readonly("matrices", &GeneratorSet::matrices)
        .def_readonly("source", &GeneratorSet::source);
    m.def("load_generators", &load_generators, py::arg("path"),
          py::arg("det_tolerance") = kDetTolerance);

    py::class_<OrbitCloud>(m, "OrbitCloud")
        .def_readonly("points", &OrbitCloud::points)
        .def_readonly("word_length", &OrbitCloud::word_length)
        .def_readonly("basepoint", &OrbitCloud::basepoint);
    m.def(
        "enumerate_orbit",
        [](const GeneratorSet& gens, const HPoint& basepoint, std::int64_t L,
           double merge_tolerance, std::size_t point_budget) {
            OrbitOptions opts;
            opts.merge_tolerance = merge_tolerance;
            opts.point_budget = point_budget;
            return enumerate_orbit(gens, basepoint, L, opts);
        },
        py::arg("gens"), py::arg("basepoint"), py::arg("L"), py::arg("merge_tolerance") = 1e-6,
        py::arg("point_budget") = 200'000);

    py::class_<QIFit>(m, "QIFit")
        .def_readonly("lambda_", &QIFit::lambda)
        .def_readonly("epsilon", &QIFit::epsilon);
    py::class_<QIScatter>(m, "QIScatter")
        .def_readonly("pairs", &QIScatter::pairs)
        .def_readonly("fit_full", &QIScatter::fit_full)
        .def_readonly("fit_half", &QIScatter::fit_half)
        .def_readonly("qi_suspect", &QIScatter::qi_suspect);
    m.def("qi_scatter", &qi_scatter);

    py::class_<HoroBand>(m, "HoroBand")
        .def(py::init<double, double>(), py::arg("h0"), py::arg("epsilon"))
        .def_readonly("h0", &HoroBand::h0)
        .def_readonly("epsilon", &HoroBand::epsilon)
        .def("contains", &HoroBand::contains);
    m.def("horoband_intersect", &horoband_intersect);

    py::class_<GraphMetric>(m, "GraphMetric")
        .def("__call__", &GraphMetric::operator())
        .def("__len__", &GraphMetric::size)
        .def_property_readonly("connected", &GraphMetric::connected)
        .def_property_readonly("edge_count", &GraphMetric::edge_count);
    m.def("band_graph_metric", &band_graph_metric, py::arg("cloud"), py::arg("edge_threshold"),
          py::arg("node_budget") = 3000);

    py::class_<GridCompareReport>(m, "GridCompareReport")
        .def_readonly("k", &GridCompareReport::k)
        .def_readonly("used_points", &GridCompareReport::used_points)
        .def_readonly("unit", &GridCompareReport::unit)
        .def_readonly("graph_connected", &GridCompareReport::graph_connected)
        .def_readonly("bottleneck_radius", &GridCompareReport::bottleneck_radius)
        .def_readonly("lip_forward", &GridCompareReport::lip_forward)
        .def_readonly("lip_inverse", &GridCompareReport::lip_inverse);
    m.def(
        "grid_compare",
        [](const PointCloud& cloud, const GraphMetric& metric, std::size_t k,
           double plane_height) {
            GridCompareOptions opts;
            opts.k = k;
            opts.plane_height = plane_height;
            return grid_compare(cloud, metric, opts);
        },
        py::arg("cloud"), py::arg("metric"), py::arg("k") = 0, py::arg("plane_height") = 0.0);
}
