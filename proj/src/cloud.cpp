#include "horokit/cloud.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "horokit/errors.hpp"
#include "horokit/report.hpp"

namespace horokit {

namespace {

// Bit-pattern key for exact duplicate detection (distinguishes -0.0 from 0.0).
struct PointBits {
    std::uint64_t x, y, z;
    friend auto operator<=>(const PointBits&, const PointBits&) = default;
};

PointBits bits_of(const HPoint& p) {
    PointBits b;
    std::memcpy(&b.x, &p.x, 8);
    std::memcpy(&b.y, &p.y, 8);
    std::memcpy(&b.z, &p.z, 8);
    return b;
}

}  // namespace

PointCloud::PointCloud(std::string label, std::vector<HPoint> points)
    : label_(std::move(label)), points_(std::move(points)) {
    std::vector<PointBits> keys(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) keys[i] = bits_of(points_[i]);
    std::sort(keys.begin(), keys.end());
    if (std::adjacent_find(keys.begin(), keys.end()) != keys.end())
        throw std::invalid_argument("PointCloud '" + label_ + "': duplicate point");
}

PointCloud PointCloud::subset(std::span<const std::size_t> indices, std::string label) const {
    std::vector<HPoint> pts;
    pts.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= points_.size()) throw std::invalid_argument("PointCloud::subset: index out of range");
        pts.push_back(points_[i]);
    }
    return PointCloud(std::move(label), std::move(pts));
}

void write_cloud_csv(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "x,y,z\n";
    for (const HPoint& p : cloud.points())
        out << format_double17(p.x) << ',' << format_double17(p.y) << ',' << format_double17(p.z)
            << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

double parse_field(std::string_view field, const std::string& path, std::size_t line_no) {
    // Trim surrounding spaces; from_chars wants a bare number.
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

}  // namespace

PointCloud read_cloud_csv(const std::string& path, std::string label) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path);
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y,z") throw ParseError(path + ":1: expected header 'x,y,z'");

    std::vector<HPoint> pts;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string_view rest(line);
        double vals[3];
        for (int k = 0; k < 3; ++k) {
            std::size_t comma = (k < 2) ? rest.find(',') : std::string_view::npos;
            if (k < 2 && comma == std::string_view::npos)
                throw ParseError(path + ":" + std::to_string(line_no) + ": expected 3 fields");
            std::string_view field = (k < 2) ? rest.substr(0, comma) : rest;
            vals[k] = parse_field(field, path, line_no);
            if (k < 2) rest.remove_prefix(comma + 1);
        }
        try {
            pts.emplace_back(vals[0], vals[1], vals[2]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (label.empty()) label = path;
    return PointCloud(std::move(label), std::move(pts));
}

std::vector<std::size_t> trim_keep_indices(const PointCloud& cloud, std::size_t target) {
    const std::size_t n = cloud.size();
    if (target > n) throw std::invalid_argument("trim_keep_indices: target exceeds cloud size");
    double cx = 0, cy = 0, cl = 0;
    for (const HPoint& p : cloud.points()) {
        cx += p.x;
        cy += p.y;
        cl += std::log(p.z);
    }
    cx /= double(n);
    cy /= double(n);
    cl /= double(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto key = [&](std::size_t i) {
        const HPoint& p = cloud[i];
        const double dx = p.x - cx, dy = p.y - cy, dl = std::log(p.z) - cl;
        return dx * dx + dy * dy + dl * dl;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        const double ki = key(i), kj = key(j);
        if (ki != kj) return ki < kj;
        return i < j;
    });
    order.resize(target);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace horokit
