#pragma once

#include <complex>
#include <optional>
#include <vector>

namespace geoflow::hyp {

using Complex = std::complex<double>;

// Interior point of the Poincare disk (curvature -1, metric 2|dz|/(1-|z|^2)).
struct DiskPoint {
    Complex z{0.0, 0.0};
};

inline DiskPoint origin() { return DiskPoint{}; }
bool nearly_boundary(const DiskPoint& p, double tol = 1e-9);

// Point of the circle at infinity, stored with unit modulus.
struct BoundaryPoint {
    Complex u{1.0, 0.0};
    double angle() const;
    static BoundaryPoint from_angle(double theta);
};

// Orientation-preserving isometry of the disk in SU(1,1) normal form:
//   z -> (a z + b) / (conj(b) z + conj(a)),   |a|^2 - |b|^2 = 1.
struct Isometry {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};

    static Isometry identity() { return {}; }
    static Isometry rotation(double theta);
    // Hyperbolic translation along a diameter, sending 0 to z0.
    static Isometry translation_to(Complex z0);
    // Conjugate of the upper half-plane map z -> (az+b)/(cz+d), ad - bc = 1,
    // through the Cayley transform z -> (z - i)/(z + i).
    static Isometry from_halfplane(double a, double b, double c, double d);

    Isometry inverse() const { return {std::conj(a), -b}; }
    Isometry normalized() const;
    Isometry pow(long long m) const;
    double det_error() const;  // | |a|^2 - |b|^2 - 1 |

    DiskPoint operator()(const DiskPoint& p) const;
    BoundaryPoint operator()(const BoundaryPoint& xi) const;

    double trace() const { return 2.0 * a.real(); }
};

Isometry operator*(const Isometry& g, const Isometry& h);

// d(x, y) for the curvature -1 metric.
double distance(const DiskPoint& x, const DiskPoint& y);

// d(0, g 0) = 2 log(|a| + |b|); exact in the matrix entries, stable for
// orbit points exponentially close to the boundary.
double orbit_distance(const Isometry& g);

// Busemann function B_xi(x, y) = lim_t [d(x, xi_t) - d(y, xi_t)], via the
// Poisson-kernel closed form in the disk model.
double busemann(const BoundaryPoint& xi, const DiskPoint& x, const DiskPoint& y);

// B_xi(g 0, 0) = log |conj(a) xi - b|^2, exact in the matrix entries.
double busemann_orbit(const Isometry& g, const BoundaryPoint& xi);

enum class IsoKind { identity, elliptic, parabolic, hyperbolic };

struct IsometryClass {
    IsoKind kind = IsoKind::identity;
    std::vector<BoundaryPoint> fixed;  // boundary fixed points: 0, 1 or 2
    double translation_length = 0.0;   // hyperbolic only
    bool near_degenerate = false;      // |trace| within the band around 2
    // hyperbolic: fixed[0] attracting, fixed[1] repelling
};

IsometryClass classify(const Isometry& g, double trace_band = 1e-9);

}  // namespace geoflow::hyp
