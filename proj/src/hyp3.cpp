#include "horokit/hyp3.hpp"

#include <cmath>
#include <stdexcept>

#include "horokit/errors.hpp"

namespace horokit {

HPoint::HPoint(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z))
        throw std::invalid_argument("HPoint: coordinates must be finite");
    if (!(z > 0.0)) throw std::invalid_argument("HPoint: height must be positive");
}

double acosh1p(double u) {
    if (u < 0.0) u = 0.0;  // guard tiny negative rounding from callers
    return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

double dist(const HPoint& p, const HPoint& q) {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    const double dz = p.z - q.z;
    const double u = (dx * dx + dy * dy + dz * dz) / (2.0 * p.z * q.z);
    return acosh1p(u);
}

HPoint dilate(double lambda, const HPoint& p) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("dilate: scale must be positive and finite");
    return HPoint(lambda * p.x, lambda * p.y, lambda * p.z);
}

HPoint mobius_apply(const SL2C& g, const HPoint& p) {
    const std::complex<double> w(p.x, p.y);
    const std::complex<double> cwd = g.c * w + g.d;
    const double denom = std::norm(cwd) + std::norm(g.c) * p.z * p.z;
    const std::complex<double> num =
        (g.a * w + g.b) * std::conj(cwd) + g.a * std::conj(g.c) * (p.z * p.z);
    const double zz = p.z / denom;
    const std::complex<double> ww = num / denom;
    if (!std::isfinite(ww.real()) || !std::isfinite(ww.imag()) || !std::isfinite(zz) || !(zz > 0.0))
        throw DegenerateTransformError("mobius_apply: image left the upper half-space");
    return HPoint(ww.real(), ww.imag(), zz);
}

}  // namespace horokit
