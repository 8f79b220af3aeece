#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "horokit/hyp3.hpp"

namespace horokit {

// Finite labelled point set in upper half-space.  Indices are dense 0..N-1;
// construction rejects bitwise-identical duplicate points.
class PointCloud {
  public:
    PointCloud() = default;
    PointCloud(std::string label, std::vector<HPoint> points);

    const std::string& label() const { return label_; }
    const std::vector<HPoint>& points() const { return points_; }
    const HPoint& operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    // New cloud from a subset of indices (kept in the given order).
    PointCloud subset(std::span<const std::size_t> indices, std::string label) const;

  private:
    std::string label_;
    std::vector<HPoint> points_;
};

// CSV exchange format: header "x,y,z", one point per row, 17 significant
// digits (round-trips doubles exactly).
void write_cloud_csv(const PointCloud& cloud, const std::string& path);
PointCloud read_cloud_csv(const std::string& path, std::string label = "");

// Keeps `target` points, dropping the points farthest from the cloud's
// centroid in (x, y, ln z) coordinates first (ties: higher index dropped
// first).  Returned indices are ascending.  Used to reconcile cardinalities
// before matching ("trim toward the middle, discard the rim").
std::vector<std::size_t> trim_keep_indices(const PointCloud& cloud, std::size_t target);

}  // namespace horokit
