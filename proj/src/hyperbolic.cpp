#include "geoflow/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

#include "geoflow/numerics.hpp"

namespace geoflow::hyp {

bool nearly_boundary(const DiskPoint& p, double tol) { return std::abs(p.z) >= 1.0 - tol; }

double BoundaryPoint::angle() const { return num::wrap_angle(std::arg(u)); }

BoundaryPoint BoundaryPoint::from_angle(double theta) {
    return BoundaryPoint{Complex{std::cos(theta), std::sin(theta)}};
}

Isometry Isometry::rotation(double theta) {
    // z -> e^{i theta} z, normal form with a = e^{i theta / 2}
    return {Complex{std::cos(theta / 2), std::sin(theta / 2)}, Complex{0, 0}};
}

Isometry Isometry::translation_to(Complex z0) {
    double r = std::abs(z0);
    if (r >= 1.0) throw std::invalid_argument("translation_to: target outside disk");
    double s = 1.0 / std::sqrt(1.0 - r * r);
    return {Complex{s, 0.0}, s * z0};
}

Isometry Isometry::from_halfplane(double a, double b, double c, double d) {
    double det = a * d - b * c;
    if (std::abs(det - 1.0) > 1e-10)
        throw std::invalid_argument("from_halfplane: determinant must be 1");
    return Isometry{Complex{(a + d) / 2, (b - c) / 2}, Complex{(a - d) / 2, -(b + c) / 2}}
        .normalized();
}

Isometry Isometry::normalized() const {
    double q = std::norm(a) - std::norm(b);
    if (std::abs(q - 1.0) < 1e-6) {
        double s = 1.0 / std::sqrt(q);
        return {a * s, b * s};
    }
    // Entries of high powers make |a|^2 - |b|^2 cancel below fp resolution;
    // products of normal forms drift only multiplicatively, so leave them.
    if (std::abs(a) > 1e7) return *this;
    if (q <= 0) throw std::domain_error("normalized: not a disk-preserving normal form");
    return {a / std::sqrt(q), b / std::sqrt(q)};
}

double Isometry::det_error() const { return std::abs(std::norm(a) - std::norm(b) - 1.0); }

Isometry operator*(const Isometry& g, const Isometry& h) {
    return Isometry{g.a * h.a + g.b * std::conj(h.b), g.a * h.b + g.b * std::conj(h.a)}
        .normalized();
}

Isometry Isometry::pow(long long m) const {
    if (m == 0) return identity();
    Isometry base = m > 0 ? *this : inverse();
    unsigned long long e = m > 0 ? static_cast<unsigned long long>(m)
                                 : static_cast<unsigned long long>(-(m + 1)) + 1ull;
    Isometry acc = identity();
    while (e > 0) {
        if (e & 1ull) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

DiskPoint Isometry::operator()(const DiskPoint& p) const {
    Complex w = (a * p.z + b) / (std::conj(b) * p.z + std::conj(a));
    return DiskPoint{w};
}

BoundaryPoint Isometry::operator()(const BoundaryPoint& xi) const {
    Complex w = (a * xi.u + b) / (std::conj(b) * xi.u + std::conj(a));
    double r = std::abs(w);
    if (r == 0) throw std::domain_error("isometry: boundary image degenerated");
    return BoundaryPoint{w / r};
}

double distance(const DiskPoint& x, const DiskPoint& y) {
    // 2 artanh(|x-y| / |1 - conj(y) x|), written via
    // |1-conj(y)x|^2 - |x-y|^2 = (1-|x|^2)(1-|y|^2) to avoid cancellation
    double A = std::abs(1.0 - std::conj(y.z) * x.z);
    double B = std::abs(x.z - y.z);
    double px = 1.0 - std::norm(x.z), py = 1.0 - std::norm(y.z);
    if (px <= 0 || py <= 0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::log(A + B) - std::log(px) - std::log(py);
}

double orbit_distance(const Isometry& g) {
    return 2.0 * std::log(std::abs(g.a) + std::abs(g.b));
}

double busemann(const BoundaryPoint& xi, const DiskPoint& x, const DiskPoint& y) {
    double nx = std::norm(xi.u - x.z) / (1.0 - std::norm(x.z));
    double ny = std::norm(xi.u - y.z) / (1.0 - std::norm(y.z));
    return std::log(nx) - std::log(ny);
}

double busemann_orbit(const Isometry& g, const BoundaryPoint& xi) {
    return 2.0 * std::log(std::abs(std::conj(g.a) * xi.u - g.b));
}

IsometryClass classify(const Isometry& g, double trace_band) {
    IsometryClass out;
    double tr = g.trace();
    double abs_tr = std::abs(tr);
    if (std::abs(g.b) < trace_band && std::abs(g.a.imag()) < trace_band) {
        out.kind = IsoKind::identity;
        return out;
    }
    if (abs_tr < 2.0 - trace_band) {
        out.kind = IsoKind::elliptic;
        return out;
    }
    // boundary fixed points solve conj(b) z^2 + (conj(a) - a) z - b = 0
    Complex A = std::conj(g.b);
    Complex B = std::conj(g.a) - g.a;
    Complex C = -g.b;
    if (abs_tr <= 2.0 + trace_band) {
        if (std::abs(A) < 1e-15) {  // vanishing rotation, no boundary fixed point
            out.kind = IsoKind::elliptic;
            out.near_degenerate = true;
            return out;
        }
        out.kind = IsoKind::parabolic;
        out.near_degenerate = true;
        Complex z = -B / (2.0 * A);
        out.fixed.push_back(BoundaryPoint{z / std::abs(z)});
        return out;
    }
    out.kind = IsoKind::hyperbolic;
    out.translation_length = 2.0 * std::acosh(abs_tr / 2.0);
    Complex disc = std::sqrt(B * B - 4.0 * A * C);
    Complex z1 = (-B + disc) / (2.0 * A);
    Complex z2 = (-B - disc) / (2.0 * A);
    z1 /= std::abs(z1);
    z2 /= std::abs(z2);
    // attracting fixed point has |g'(z)| = 1/|conj(b) z + conj(a)|^2 < 1
    double d1 = std::norm(std::conj(g.b) * z1 + std::conj(g.a));
    if (d1 > 1.0) {
        out.fixed = {BoundaryPoint{z1}, BoundaryPoint{z2}};
    } else {
        out.fixed = {BoundaryPoint{z2}, BoundaryPoint{z1}};
    }
    return out;
}

}  // namespace geoflow::hyp
