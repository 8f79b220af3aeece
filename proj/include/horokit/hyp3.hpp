#pragma once

#include <complex>

namespace horokit {

// Point of the upper half-space model: (x, y) horizontal, z = height > 0.
// All components must be finite.
struct HPoint {
    double x{0.0};
    double y{0.0};
    double z{1.0};

    HPoint() = default;
    HPoint(double x, double y, double z);  // throws std::invalid_argument on bad input

    friend bool operator==(const HPoint& p, const HPoint& q) {
        return p.x == q.x && p.y == q.y && p.z == q.z;
    }
};

// arccosh(1 + u) for u >= 0, stable near u = 0 (log1p form instead of the
// naive acos-of-a-value-near-1).
double acosh1p(double u);

// Geodesic distance:
//   dist(p, q) = arccosh(1 + (|p-q|^2) / (2 p.z q.z)).
// Symmetric, zero iff p == q up to rounding.
double dist(const HPoint& p, const HPoint& q);

// Scaling by lambda > 0 about the origin of the boundary plane; an isometry
// of the model.
HPoint dilate(double lambda, const HPoint& p);

// Complex 2x2 matrix acting on upper half-space by Moebius extension.
// Determinant must be within det_tolerance of 1 where an operation requires
// unimodularity; inverse() is the exact adjugate (no division), so it is the
// true inverse precisely when det == 1.
struct SL2C {
    std::complex<double> a{1.0}, b{0.0}, c{0.0}, d{1.0};

    std::complex<double> det() const { return a * d - b * c; }
    bool is_unimodular(double tol) const { return std::abs(det() - 1.0) <= tol; }
    SL2C inverse() const { return SL2C{d, -b, -c, a}; }

    friend SL2C operator*(const SL2C& g, const SL2C& h) {
        return SL2C{g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                    g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d};
    }
    friend bool operator==(const SL2C& g, const SL2C& h) {
        return g.a == h.a && g.b == h.b && g.c == h.c && g.d == h.d;
    }
};

inline constexpr double kDetTolerance = 1e-9;

// Extension of the Moebius map to upper half-space via quaternion evaluation
// at w = (x + iy) + z j:
//   D  = |c w_c + d|^2 + |c|^2 z^2
//   w' = ((a w_c + b) conj(c w_c + d) + a conj(c) z^2) / D,   z' = z / D.
// Throws DegenerateTransformError if the image leaves the model numerically.
HPoint mobius_apply(const SL2C& g, const HPoint& p);

}  // namespace horokit
