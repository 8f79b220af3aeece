#include "horokit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "horokit/cloud.hpp"
#include "horokit/errors.hpp"
#include "horokit/horolattice.hpp"
#include "horokit/matching.hpp"
#include "horokit/orbitnet.hpp"
#include "horokit/report.hpp"
#include "horokit/rng.hpp"
#include "horokit/tla.hpp"
#include "horokit/udbg.hpp"

namespace horokit {

namespace {

constexpr const char* kToolName = "horokit";
constexpr const char* kToolVersion = "0.1.0";

void emit_report(const nlohmann::ordered_json& doc, const std::string& out_path) {
    const std::string text = dump_report(doc);
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

nlohmann::ordered_json report_skeleton(const std::string& command,
                                       nlohmann::ordered_json config) {
    nlohmann::ordered_json doc;
    doc["format_version"] = kReportFormatVersion;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["command"] = command;
    doc["config"] = std::move(config);
    return doc;
}

int emit_error(const std::string& command, const nlohmann::ordered_json& config,
               const std::string& message, const std::string& out_path) {
    nlohmann::ordered_json doc = report_skeleton(command, config);
    doc["error"] = message;
    doc["pass"] = false;
    try {
        emit_report(doc, out_path);
    } catch (const std::exception&) {
        std::cerr << command << ": " << message << "\n";
    }
    return 1;
}

std::string pairing_checksum(std::span<const std::size_t> pairing) {
    std::string bytes;
    bytes.reserve(pairing.size() * 8);
    for (std::size_t v : pairing) {
        std::uint64_t w = v;
        for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<char>((w >> (8 * b)) & 0xff));
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

void write_pairing_csv(std::span<const std::size_t> pairing, const std::string& path) {
    std::string text = "left_index,right_index\n";
    for (std::size_t i = 0; i < pairing.size(); ++i)
        text += std::to_string(i) + "," + std::to_string(pairing[i]) + "\n";
    write_text_file(path, text);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= s.size(); ++pos) {
        if (pos != s.size() && s[pos] != sep) continue;
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad integer for ") + what + ": '" + s + "'");
    }
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad number for ") + what + ": '" + s + "'");
    }
}

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const std::string& f : split(s, ',')) out.push_back(parse_double(f, what));
    return out;
}

HPoint parse_point(const std::string& s) {
    const std::vector<std::string> f = split(s, ',');
    if (f.size() != 3) throw std::invalid_argument("point must be 'x,y,z': '" + s + "'");
    return HPoint(parse_double(f[0], "point x"), parse_double(f[1], "point y"),
                  parse_double(f[2], "point z"));
}

// Cloud specs: "window:A,C" (embedded dyadic window), "perturb:A,C,EPS"
// (window with a seeded height-proportional jiggle of size <= ~sqrt(3)*EPS),
// anything else = path of a cloud CSV.
PointCloud resolve_cloud(const std::string& spec, std::uint64_t seed) {
    if (spec.rfind("window:", 0) == 0) {
        const std::vector<std::string> f = split(spec.substr(7), ',');
        if (f.size() != 2) throw std::invalid_argument("window spec must be 'window:A,C'");
        const LatticeWindow win(parse_int(f[0], "window A"), parse_int(f[1], "window C"));
        return win.to_cloud();
    }
    if (spec.rfind("perturb:", 0) == 0) {
        const std::vector<std::string> f = split(spec.substr(8), ',');
        if (f.size() != 3) throw std::invalid_argument("perturb spec must be 'perturb:A,C,EPS'");
        const double eps = parse_double(f[2], "perturb EPS");
        if (!(eps >= 0.0) || !std::isfinite(eps))
            throw std::invalid_argument("perturb EPS must be finite and >= 0");
        const LatticeWindow win(parse_int(f[0], "perturb A"), parse_int(f[1], "perturb C"));
        const PointCloud base = win.to_cloud();
        SplitMix64 rng = child_rng(seed, "perturb-cloud");
        std::vector<HPoint> pts;
        pts.reserve(base.size());
        for (const HPoint& p : base.points()) {
            const double u1 = rng.uniform(-1.0, 1.0);
            const double u2 = rng.uniform(-1.0, 1.0);
            const double u3 = rng.uniform(-1.0, 1.0);
            pts.push_back(
                HPoint(p.x + eps * p.z * u1, p.y + eps * p.z * u2, p.z * std::exp(eps * u3)));
        }
        return PointCloud(base.label() + "-perturbed", std::move(pts));
    }
    return read_cloud_csv(spec, spec);
}

FiniteAction identity_action(const PointCloud& carrier) {
    std::vector<std::ptrdiff_t> id(carrier.size());
    std::iota(id.begin(), id.end(), std::ptrdiff_t{0});
    return FiniteAction(carrier, id, id);
}

// Largest |measured - closed_form| over nonzero words with defined points.
double displacement_constancy_error(const TLACertificate& cert) {
    double err = 0.0;
    for (const WordDisplacement& w : cert.words) {
        if (w.defined == 0) continue;
        const double closed = displacement(GridVector{w.m, w.n});
        err = std::max(err, w.max_displacement - closed);
        err = std::max(err, closed - w.min_displacement);
    }
    return err;
}

// ---------------------------------------------------------------- verify-lattice

struct VerifyLatticeConfig {
    std::int64_t A = 16, C = 8, K = 5;
    std::int64_t samples = 100'000;
    std::uint64_t seed = 1;
    double covering_bound = 0.75;
    std::int64_t margin = 2;
    double min_distance_tol = 1e-9;
    double displacement_tol = 1e-12;
    std::string radii = "1,2,3,4,5,6";
    double slope_r_lo = 2.0, slope_r_hi = 6.0;
    double slope_min = 0.8, slope_max = 2.5;
    std::size_t budget = 1'000'000;
    std::string inject_fault;
    std::string out;
};

nlohmann::ordered_json config_json(const VerifyLatticeConfig& c) {
    nlohmann::ordered_json j;
    j["A"] = c.A;
    j["C"] = c.C;
    j["K"] = c.K;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["covering-bound"] = c.covering_bound;
    j["margin"] = c.margin;
    j["min-distance-tol"] = c.min_distance_tol;
    j["displacement-tol"] = c.displacement_tol;
    j["radii"] = c.radii;
    j["slope-r-lo"] = c.slope_r_lo;
    j["slope-r-hi"] = c.slope_r_hi;
    j["slope-min"] = c.slope_min;
    j["slope-max"] = c.slope_max;
    j["point-budget"] = c.budget;
    j["inject-fault"] = c.inject_fault;
    j["out"] = c.out;
    return j;
}

int cmd_verify_lattice(const VerifyLatticeConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("verify-lattice", config_json(c));
    try {
        if (!c.inject_fault.empty() && c.inject_fault != "freeness")
            throw std::invalid_argument("unknown --inject-fault '" + c.inject_fault +
                                        "' (verify-lattice supports: freeness)");
        const std::vector<double> radii = parse_double_list(c.radii, "--radii");

        const LatticeWindow win(c.A, c.C, c.budget);
        const PointCloud cloud = win.to_cloud();
        nlohmann::ordered_json results;
        results["window"] = {{"label", cloud.label()}, {"points", cloud.size()}};
        bool pass = true;

        // Minimum pairwise distance: ln 2 once two levels exist (vertical
        // doubling pair), else the single-level grid step arccosh(3/2).
        {
            const MinDistanceResult md = min_pairwise_distance(cloud);
            const double expected = c.C >= 1 ? std::log(2.0) : acosh1p(0.5);
            const bool ok = std::abs(md.value - expected) <= c.min_distance_tol;
            results["min_distance"] = {{"value", md.value},       {"expected", expected},
                                       {"witness_i", md.i},       {"witness_j", md.j},
                                       {"tolerance", c.min_distance_tol}, {"pass", ok}};
            pass = pass && ok;
        }

        // Freeness + displacement constancy via the word certificate.
        {
            const FiniteAction action = c.inject_fault == "freeness"
                                            ? identity_action(cloud)
                                            : make_dyadic_action(win);
            const TLACertificate cert = verify_translation_like(action, c.K);
            const bool free_ok = cert.violation_count == 0;
            results["freeness"] = {{"violation_count", cert.violation_count}, {"pass", free_ok}};
            const double cerr = displacement_constancy_error(cert);
            const bool disp_ok = cerr < c.displacement_tol;
            results["displacement_constancy"] = {
                {"max_error", cerr}, {"tolerance", c.displacement_tol}, {"pass", disp_ok}};
            results["certificate"] = cert.to_json();
            pass = pass && free_ok && disp_ok;
        }

        // Ball-census growth slope.
        {
            const GrowthProfile prof = ball_profile(cloud, radii, CenterStrategy::all());
            const double slope = growth_slope(prof, c.slope_r_lo, c.slope_r_hi);
            const bool ok = slope >= c.slope_min && slope <= c.slope_max;
            results["growth"] = {{"radii", prof.radii},
                                 {"counts", prof.counts},
                                 {"slope", slope},
                                 {"slope_window", {c.slope_r_lo, c.slope_r_hi}},
                                 {"slope_range", {c.slope_min, c.slope_max}},
                                 {"pass", ok}};
            pass = pass && ok;
        }

        // Covering radius over the window interior.
        {
            const ScaledRegion region = interior_region(c.A, c.C, c.margin);
            const CoveringResult cov = covering_radius(cloud, region, c.samples, c.seed);
            const bool ok = cov.radius <= c.covering_bound;
            results["covering"] = {
                {"region", "interior"},
                {"margin", c.margin},
                {"radius", cov.radius},
                {"worst", {{"x", cov.worst.x}, {"y", cov.worst.y}, {"z", cov.worst.z}}},
                {"samples", cov.samples},
                {"bound", c.covering_bound},
                {"pass", ok}};
            pass = pass && ok;
        }

        doc["results"] = std::move(results);
        doc["pass"] = pass;
        emit_report(doc, c.out);
        return pass ? 0 : 2;
    } catch (const std::exception& e) {
        return emit_error("verify-lattice", config_json(c), e.what(), c.out);
    }
}

// ---------------------------------------------------------------- profile-growth

struct ProfileGrowthConfig {
    std::int64_t A = 16, C = 8;
    std::string radii = "1,2,3,4,5,6";
    std::size_t center_sample = 0;  // 0 = every point
    std::uint64_t seed = 1;
    double slope_r_lo = 2.0, slope_r_hi = 6.0;
    double slope_min = 0.8, slope_max = 2.5;
    std::size_t budget = 1'000'000;
    std::string csv;
    std::string out;
};

nlohmann::ordered_json config_json(const ProfileGrowthConfig& c) {
    nlohmann::ordered_json j;
    j["A"] = c.A;
    j["C"] = c.C;
    j["radii"] = c.radii;
    j["center-sample"] = c.center_sample;
    j["seed"] = c.seed;
    j["slope-r-lo"] = c.slope_r_lo;
    j["slope-r-hi"] = c.slope_r_hi;
    j["slope-min"] = c.slope_min;
    j["slope-max"] = c.slope_max;
    j["point-budget"] = c.budget;
    j["csv"] = c.csv;
    j["out"] = c.out;
    return j;
}

int cmd_profile_growth(const ProfileGrowthConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("profile-growth", config_json(c));
    try {
        const std::vector<double> radii = parse_double_list(c.radii, "--radii");
        const LatticeWindow win(c.A, c.C, c.budget);
        const PointCloud cloud = win.to_cloud();
        const CenterStrategy centers = c.center_sample == 0
                                           ? CenterStrategy::all()
                                           : CenterStrategy::sample(c.center_sample, c.seed);
        const GrowthProfile prof = ball_profile(cloud, radii, centers);
        if (!c.csv.empty()) write_profile_csv(prof, c.csv);
        const double slope = growth_slope(prof, c.slope_r_lo, c.slope_r_hi);
        const bool pass = slope >= c.slope_min && slope <= c.slope_max;

        doc["results"] = {{"points", cloud.size()},
                          {"radii", prof.radii},
                          {"counts", prof.counts},
                          {"centers_used", prof.centers_used},
                          {"slope", slope},
                          {"slope_window", {c.slope_r_lo, c.slope_r_hi}},
                          {"slope_range", {c.slope_min, c.slope_max}}};
        doc["pass"] = pass;
        emit_report(doc, c.out);
        return pass ? 0 : 2;
    } catch (const std::exception& e) {
        return emit_error("profile-growth", config_json(c), e.what(), c.out);
    }
}

// ---------------------------------------------------------------- covering

struct CoveringConfig {
    std::int64_t A = 16, C = 8;
    std::string region = "interior";
    std::int64_t margin = 2;
    double xy_bound = 8.0, z_lo = 0.125, z_hi = 8.0;
    std::int64_t samples = 100'000;
    std::uint64_t seed = 1;
    double bound = -1.0;  // < 0: report only, no gate
    std::size_t budget = 1'000'000;
    std::string out;
};

nlohmann::ordered_json config_json(const CoveringConfig& c) {
    nlohmann::ordered_json j;
    j["A"] = c.A;
    j["C"] = c.C;
    j["region"] = c.region;
    j["margin"] = c.margin;
    j["xy-bound"] = c.xy_bound;
    j["z-lo"] = c.z_lo;
    j["z-hi"] = c.z_hi;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["bound"] = c.bound;
    j["point-budget"] = c.budget;
    j["out"] = c.out;
    return j;
}

int cmd_covering(const CoveringConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("covering", config_json(c));
    try {
        const LatticeWindow win(c.A, c.C, c.budget);
        const PointCloud cloud = win.to_cloud();
        Region region;
        if (c.region == "interior")
            region = interior_region(c.A, c.C, c.margin);
        else if (c.region == "box")
            region = BoxRegion{c.xy_bound, c.xy_bound, c.z_lo, c.z_hi};
        else
            throw std::invalid_argument("--region must be 'interior' or 'box'");

        const CoveringResult cov = covering_radius(cloud, region, c.samples, c.seed);
        const bool gated = c.bound >= 0.0;
        const bool pass = !gated || cov.radius <= c.bound;
        doc["results"] = {
            {"points", cloud.size()},
            {"radius", cov.radius},
            {"worst", {{"x", cov.worst.x}, {"y", cov.worst.y}, {"z", cov.worst.z}}},
            {"samples", cov.samples},
            {"gated", gated}};
        doc["pass"] = pass;
        emit_report(doc, c.out);
        return pass ? 0 : 2;
    } catch (const std::exception& e) {
        return emit_error("covering", config_json(c), e.what(), c.out);
    }
}

// ---------------------------------------------------------------- match

struct MatchConfig {
    std::string left = "window:8,4";
    std::string right = "perturb:8,4,0.05";
    bool no_trim = false;
    bool oracle = false;
    std::uint64_t seed = 1;
    std::string pairing_csv;
    std::string out;
};

nlohmann::ordered_json config_json(const MatchConfig& c) {
    nlohmann::ordered_json j;
    j["left"] = c.left;
    j["right"] = c.right;
    j["no-trim"] = c.no_trim;
    j["oracle"] = c.oracle;
    j["seed"] = c.seed;
    j["pairing-csv"] = c.pairing_csv;
    j["out"] = c.out;
    return j;
}

int cmd_match(const MatchConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("match", config_json(c));
    try {
        PointCloud left = resolve_cloud(c.left, c.seed);
        PointCloud right = resolve_cloud(c.right, c.seed);
        const std::size_t left_raw = left.size(), right_raw = right.size();
        if (left.size() != right.size()) {
            if (c.no_trim)
                throw std::invalid_argument(
                    "cardinality mismatch (" + std::to_string(left.size()) + " vs " +
                    std::to_string(right.size()) + ") and trimming is disabled");
            const std::size_t target = std::min(left.size(), right.size());
            if (left.size() > target)
                left = left.subset(trim_keep_indices(left, target), left.label() + "-trimmed");
            if (right.size() > target)
                right = right.subset(trim_keep_indices(right, target), right.label() + "-trimmed");
        }
        if (left.empty()) throw std::invalid_argument("empty clouds cannot be matched");

        const BottleneckBijection bb = bottleneck_bijection(left, right);
        if (!c.pairing_csv.empty()) write_pairing_csv(bb.pairing, c.pairing_csv);

        bool pass = true;
        nlohmann::ordered_json results;
        results["left_points"] = left_raw;
        results["right_points"] = right_raw;
        results["matched_points"] = left.size();
        results["bottleneck"] = bb.bottleneck;
        results["lip_forward"] = bb.lip_forward;
        results["lip_inverse"] = bb.lip_inverse;
        results["thresholds_tried"] = bb.thresholds_tried;
        results["pairing_checksum"] = pairing_checksum(bb.pairing);
        if (c.oracle) {
            if (left.size() > 10)
                throw std::invalid_argument("--oracle needs at most 10 points, got " +
                                            std::to_string(left.size()));
            const CrossDist ambient = ambient_cross(left, right);
            const auto [best, perm] = bottleneck_exhaustive(left.size(), ambient);
            const bool agree = best == bb.bottleneck;  // exact: both are realized distances
            results["oracle"] = {{"bottleneck", best}, {"agree", agree}};
            pass = pass && agree;
        }
        doc["results"] = std::move(results);
        doc["pass"] = pass;
        emit_report(doc, c.out);
        return pass ? 0 : 2;
    } catch (const std::exception& e) {
        return emit_error("match", config_json(c), e.what(), c.out);
    }
}

// ---------------------------------------------------------------- conjugate

struct ConjugateConfig {
    std::string source = "window:8,4";
    std::string target = "perturb:8,4,0.05";
    std::int64_t K = 5;
    std::uint64_t seed = 1;
    double slack = 1e-12;
    std::string inject_fault;
    std::string pairing_csv;
    std::string out;
};

nlohmann::ordered_json config_json(const ConjugateConfig& c) {
    nlohmann::ordered_json j;
    j["source"] = c.source;
    j["target"] = c.target;
    j["K"] = c.K;
    j["seed"] = c.seed;
    j["slack"] = c.slack;
    j["inject-fault"] = c.inject_fault;
    j["pairing-csv"] = c.pairing_csv;
    j["out"] = c.out;
    return j;
}

int cmd_conjugate(const ConjugateConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("conjugate", config_json(c));
    try {
        if (!c.inject_fault.empty() && c.inject_fault != "pairing")
            throw std::invalid_argument("unknown --inject-fault '" + c.inject_fault +
                                        "' (conjugate supports: pairing)");
        if (c.source.rfind("window:", 0) != 0)
            throw std::invalid_argument("--source must be a 'window:A,C' spec (the dyadic action "
                                        "lives on a lattice window)");
        const std::vector<std::string> f = split(c.source.substr(7), ',');
        if (f.size() != 2) throw std::invalid_argument("window spec must be 'window:A,C'");
        const LatticeWindow win(parse_int(f[0], "window A"), parse_int(f[1], "window C"));
        const FiniteAction source = make_dyadic_action(win);

        PointCloud target = resolve_cloud(c.target, c.seed);
        if (target.size() != source.size()) {
            if (target.size() < source.size())
                throw std::invalid_argument("target cloud smaller than the source window (" +
                                            std::to_string(target.size()) + " vs " +
                                            std::to_string(source.size()) + ")");
            target = target.subset(trim_keep_indices(target, source.size()),
                                   target.label() + "-trimmed");
        }

        const BottleneckBijection bb = bottleneck_bijection(source.carrier(), target);
        std::vector<std::size_t> pairing = bb.pairing;
        if (c.inject_fault == "pairing" && pairing.size() >= 2) pairing[1] = pairing[0];
        if (!c.pairing_csv.empty()) write_pairing_csv(pairing, c.pairing_csv);

        nlohmann::ordered_json results;
        results["match"] = {{"bottleneck", bb.bottleneck},
                            {"lip_forward", bb.lip_forward},
                            {"lip_inverse", bb.lip_inverse},
                            {"pairing_checksum", pairing_checksum(pairing)}};

        // The transported action needs a genuine bijection; a corrupted
        // pairing is a verification failure, not a usage error.
        std::vector<char> seen(pairing.size(), 0);
        bool bijective = pairing.size() == source.size();
        for (std::size_t y : pairing) {
            if (y >= seen.size() || seen[y]) {
                bijective = false;
                break;
            }
            seen[y] = 1;
        }
        results["pairing_bijective"] = bijective;
        if (!bijective) {
            doc["results"] = std::move(results);
            doc["pass"] = false;
            emit_report(doc, c.out);
            return 2;
        }

        const FiniteAction conj = conjugate_action(source, pairing, target);
        const TLACertificate cert = verify_translation_like(conj, c.K);
        const ConjugationBoundReport bound =
            verify_conjugation_bound(source, conj, pairing, bb.lip_forward, c.K, c.slack);

        results["certificate"] = cert.to_json();
        results["transport_bound"] = {{"pass", bound.pass},
                                      {"max_excess", bound.max_excess},
                                      {"max_ratio", bound.max_ratio},
                                      {"pairs_checked", bound.pairs_checked},
                                      {"lip_forward", bb.lip_forward},
                                      {"slack", c.slack}};
        const bool pass = cert.pass && bound.pass;
        doc["results"] = std::move(results);
        doc["pass"] = pass;
        emit_report(doc, c.out);
        return pass ? 0 : 2;
    } catch (const std::exception& e) {
        return emit_error("conjugate", config_json(c), e.what(), c.out);
    }
}

// ---------------------------------------------------------------- horoband

struct HorobandConfig {
    std::string generators;
    std::string basepoint = "0,0,1";
    std::int64_t L = 6;
    double merge_tol = 1e-6;
    std::size_t budget = 200'000;
    double h0 = 1.0;
    double band_eps = 0.5;
    double edge_threshold = 1.0;
    std::string grid_sides = "4,6,8";
    std::size_t node_budget = 3000;
    std::string orbit_csv;
    std::string band_csv;
    std::string out;
};

nlohmann::ordered_json config_json(const HorobandConfig& c) {
    nlohmann::ordered_json j;
    j["generators"] = c.generators;
    j["basepoint"] = c.basepoint;
    j["L"] = c.L;
    j["merge-tol"] = c.merge_tol;
    j["point-budget"] = c.budget;
    j["h0"] = c.h0;
    j["band-eps"] = c.band_eps;
    j["edge-threshold"] = c.edge_threshold;
    j["grid-sides"] = c.grid_sides;
    j["node-budget"] = c.node_budget;
    j["orbit-csv"] = c.orbit_csv;
    j["band-csv"] = c.band_csv;
    j["out"] = c.out;
    return j;
}

int cmd_horoband(const HorobandConfig& c) {
    nlohmann::ordered_json doc = report_skeleton("horoband", config_json(c));
    try {
        std::vector<std::size_t> sides;
        for (const std::string& s : split(c.grid_sides, ','))
            sides.push_back(static_cast<std::size_t>(parse_int(s, "--grid-sides")));

        const GeneratorSet gens = load_generators(c.generators);
        const HPoint basepoint = parse_point(c.basepoint);
        OrbitOptions oopts;
        oopts.merge_tolerance = c.merge_tol;
        oopts.point_budget = c.budget;
        const OrbitCloud orbit = enumerate_orbit(gens, basepoint, c.L, oopts);
        if (!c.orbit_csv.empty()) write_orbit_csv(orbit, c.orbit_csv);

        nlohmann::ordered_json results;
        results["generators"] = {{"source", gens.source}, {"count", gens.matrices.size()}};
        std::int64_t max_wl = 0;
        for (std::int64_t wl : orbit.word_length) max_wl = std::max(max_wl, wl);
        results["orbit"] = {{"points", orbit.points.size()},
                            {"max_word_length", max_wl},
                            {"merge_tolerance", orbit.merge_tolerance}};

        const QIScatter scatter = qi_scatter(orbit);
        results["qi"] = {{"lambda", scatter.fit_full.lambda},
                         {"epsilon", scatter.fit_full.epsilon},
                         {"lambda_half", scatter.fit_half.lambda},
                         {"epsilon_half", scatter.fit_half.epsilon},
                         {"qi_suspect", scatter.qi_suspect}};

        const HoroBand band(c.h0, c.band_eps);
        const PointCloud band_cloud = horoband_intersect(orbit, band);
        if (!c.band_csv.empty()) write_cloud_csv(band_cloud, c.band_csv);
        results["band"] = {{"h0", c.h0}, {"epsilon", c.band_eps}, {"points", band_cloud.size()}};

        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        if (band_cloud.size() >= 4) {
            const GraphMetric metric =
                band_graph_metric(band_cloud, c.edge_threshold, c.node_budget);
            results["graph"] = {{"edge_threshold", c.edge_threshold},
                                {"edges", metric.edge_count()},
                                {"connected", metric.connected()}};
            for (std::size_t k : sides) {
                if (k < 2 || k * k > band_cloud.size()) {
                    rows.push_back({{"k", k}, {"skipped", "band smaller than k^2"}});
                    continue;
                }
                try {
                    GridCompareOptions gopts;
                    gopts.k = k;
                    gopts.plane_height = c.h0;
                    const GridCompareReport rep = grid_compare(band_cloud, metric, gopts);
                    nlohmann::ordered_json row;
                    row["k"] = rep.k;
                    row["used_points"] = rep.used_points;
                    row["unit"] = rep.unit;
                    row["connected"] = rep.graph_connected;
                    if (rep.graph_connected) {
                        row["bottleneck"] = rep.bottleneck_radius;
                        row["lip_forward"] = rep.lip_forward;
                        row["lip_inverse"] = rep.lip_inverse;
                    }
                    rows.push_back(std::move(row));
                } catch (const std::exception& inst) {
                    // One degenerate instance (collinear band, disconnected
                    // subgraph, ...) aborts that instance, not the run.
                    rows.push_back({{"k", k}, {"skipped", inst.what()}});
                }
            }
        } else {
            results["graph"] = {{"skipped", "band has fewer than 4 points"}};
        }
        results["grid_compare"] = std::move(rows);

        doc["results"] = std::move(results);
        doc["pass"] = true;
        emit_report(doc, c.out);
        return 0;
    } catch (const std::exception& e) {
        return emit_error("horoband", config_json(c), e.what(), c.out);
    }
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"horokit: dyadic horolattice verification and horospherical orbit experiments"};
    app.require_subcommand(1);
    int exit_code = 0;

    VerifyLatticeConfig vc;
    CLI::App* sv = app.add_subcommand(
        "verify-lattice", "window build + min distance, displacement, freeness, growth, covering");
    sv->add_option("-A,--horizontal-bound", vc.A, "window horizontal bound");
    sv->add_option("-C,--level-bound", vc.C, "window level bound");
    sv->add_option("-K,--word-range", vc.K, "word exponent range for the certificate");
    sv->add_option("--samples", vc.samples, "covering-radius sample count");
    sv->add_option("--seed", vc.seed, "master seed");
    sv->add_option("--covering-bound", vc.covering_bound, "covering radius gate");
    sv->add_option("--margin", vc.margin, "interior-region margin (grid steps)");
    sv->add_option("--min-distance-tol", vc.min_distance_tol, "minimum-distance tolerance");
    sv->add_option("--displacement-tol", vc.displacement_tol, "displacement-constancy tolerance");
    sv->add_option("--radii", vc.radii, "ball-census radii (comma list)");
    sv->add_option("--slope-r-lo", vc.slope_r_lo, "slope fit lower radius");
    sv->add_option("--slope-r-hi", vc.slope_r_hi, "slope fit upper radius");
    sv->add_option("--slope-min", vc.slope_min, "slope gate lower bound");
    sv->add_option("--slope-max", vc.slope_max, "slope gate upper bound");
    sv->add_option("--point-budget", vc.budget, "window point budget");
    sv->add_option("--inject-fault", vc.inject_fault, "test hook: 'freeness'");
    sv->add_option("--out", vc.out, "report path (default stdout)");
    sv->callback([&] { exit_code = cmd_verify_lattice(vc); });

    ProfileGrowthConfig pc;
    CLI::App* sp = app.add_subcommand("profile-growth", "ball-census growth profile and slope");
    sp->add_option("-A,--horizontal-bound", pc.A, "window horizontal bound");
    sp->add_option("-C,--level-bound", pc.C, "window level bound");
    sp->add_option("--radii", pc.radii, "ball-census radii (comma list)");
    sp->add_option("--center-sample", pc.center_sample, "sampled center count (0 = all points)");
    sp->add_option("--seed", pc.seed, "master seed");
    sp->add_option("--slope-r-lo", pc.slope_r_lo, "slope fit lower radius");
    sp->add_option("--slope-r-hi", pc.slope_r_hi, "slope fit upper radius");
    sp->add_option("--slope-min", pc.slope_min, "slope gate lower bound");
    sp->add_option("--slope-max", pc.slope_max, "slope gate upper bound");
    sp->add_option("--point-budget", pc.budget, "window point budget");
    sp->add_option("--csv", pc.csv, "write the profile as CSV");
    sp->add_option("--out", pc.out, "report path (default stdout)");
    sp->callback([&] { exit_code = cmd_profile_growth(pc); });

    CoveringConfig cc;
    CLI::App* sc = app.add_subcommand("covering", "seeded Monte Carlo covering radius");
    sc->add_option("-A,--horizontal-bound", cc.A, "window horizontal bound");
    sc->add_option("-C,--level-bound", cc.C, "window level bound");
    sc->add_option("--region", cc.region, "'interior' or 'box'");
    sc->add_option("--margin", cc.margin, "interior-region margin (grid steps)");
    sc->add_option("--xy-bound", cc.xy_bound, "box region |x|,|y| bound");
    sc->add_option("--z-lo", cc.z_lo, "box region lower height");
    sc->add_option("--z-hi", cc.z_hi, "box region upper height");
    sc->add_option("--samples", cc.samples, "sample count");
    sc->add_option("--seed", cc.seed, "master seed");
    sc->add_option("--bound", cc.bound, "gate: fail when radius exceeds this (< 0: report only)");
    sc->add_option("--point-budget", cc.budget, "window point budget");
    sc->add_option("--out", cc.out, "report path (default stdout)");
    sc->callback([&] { exit_code = cmd_covering(cc); });

    MatchConfig mc;
    CLI::App* sm = app.add_subcommand("match", "bottleneck bijection between two clouds");
    sm->add_option("--left", mc.left, "left cloud: window:A,C | perturb:A,C,EPS | CSV path");
    sm->add_option("--right", mc.right, "right cloud spec");
    sm->add_flag("--no-trim", mc.no_trim, "fail on cardinality mismatch instead of trimming");
    sm->add_flag("--oracle", mc.oracle, "cross-check against factorial enumeration (n <= 10)");
    sm->add_option("--seed", mc.seed, "master seed (perturb specs)");
    sm->add_option("--pairing-csv", mc.pairing_csv, "write the pairing as CSV");
    sm->add_option("--out", mc.out, "report path (default stdout)");
    sm->callback([&] { exit_code = cmd_match(mc); });

    ConjugateConfig jc;
    CLI::App* sj = app.add_subcommand(
        "conjugate", "transport the window action through a matching and certify it");
    sj->add_option("--source", jc.source, "source window spec 'window:A,C'");
    sj->add_option("--target", jc.target, "target cloud spec");
    sj->add_option("-K,--word-range", jc.K, "word exponent range for the certificate");
    sj->add_option("--seed", jc.seed, "master seed (perturb specs)");
    sj->add_option("--slack", jc.slack, "rounding slack for the transport inequality");
    sj->add_option("--inject-fault", jc.inject_fault, "test hook: 'pairing'");
    sj->add_option("--pairing-csv", jc.pairing_csv, "write the pairing as CSV");
    sj->add_option("--out", jc.out, "report path (default stdout)");
    sj->callback([&] { exit_code = cmd_conjugate(jc); });

    HorobandConfig hc;
    CLI::App* sh = app.add_subcommand(
        "horoband", "orbit enumeration, band intersection, and grid comparison");
    sh->add_option("--generators", hc.generators, "generator matrix file")->required();
    sh->add_option("--basepoint", hc.basepoint, "orbit basepoint 'x,y,z'");
    sh->add_option("-L,--word-length", hc.L, "BFS word-length bound");
    sh->add_option("--merge-tol", hc.merge_tol, "orbit merge tolerance");
    sh->add_option("--point-budget", hc.budget, "orbit point budget");
    sh->add_option("--h0", hc.h0, "band center height");
    sh->add_option("--band-eps", hc.band_eps, "band half-width (hyperbolic)");
    sh->add_option("--edge-threshold", hc.edge_threshold, "proximity-graph edge threshold");
    sh->add_option("--grid-sides", hc.grid_sides, "grid sides to compare (comma list)");
    sh->add_option("--node-budget", hc.node_budget, "graph-metric node budget");
    sh->add_option("--orbit-csv", hc.orbit_csv, "write the orbit as CSV");
    sh->add_option("--band-csv", hc.band_csv, "write the band cloud as CSV");
    sh->add_option("--out", hc.out, "report path (default stdout)");
    sh->callback([&] { exit_code = cmd_horoband(hc); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    return exit_code;
}

}  // namespace horokit
