#pragma once

#include <functional>
#include <vector>

#include "geoflow/hyperbolic.hpp"
#include "geoflow/schottky.hpp"

namespace geoflow::models {

// Closed forms for d(o, g^m o) along one generator. Parabolic entries are
// affine in m, so dist is exact for all real m; hyperbolic powers use a table
// plus the asymptotic slope (exact up to exponentially small terms).
struct OrbitModel {
    schottky::GenKind kind = schottky::GenKind::hyperbolic;
    // parabolic: g^m entries a(m) = 1 + m na, b(m) = m nb (up to a global sign)
    hyp::Complex na, nb;
    // hyperbolic: tables for m = 1..cap and fitted affine tails
    double ell = 0;
    std::vector<double> dist_pos, dist_neg;
    double dist_pos_c = 0, dist_neg_c = 0;

    double dist(double m) const;  // m != 0, any magnitude
};

OrbitModel make_orbit_model(const hyp::Isometry& g, int table_cap = 512);

// First-return time of the depth-1 cylinder [b^m], evaluated at the canonical
// continuation point: tau(m) = B_xi(o, b^m o), xi = b^m xi'.
// Parabolic: tau(m) = log |P + m Q|^2 exactly; hyperbolic: table plus slope.
struct RoofModel {
    schottky::GenKind kind = schottky::GenKind::hyperbolic;
    hyp::Complex P, Q;
    double ell = 0;
    std::vector<double> tau_pos, tau_neg;
    double tau_pos_c = 0, tau_neg_c = 0;

    double tau(double m) const;
};

struct GroupShift {
    schottky::SchottkyGroup group;
    std::vector<OrbitModel> orbit;
    std::vector<RoofModel> roof;
    double tau_min = 0;       // over all sampled letters
    double v2_estimate = 0;   // empirical depth-1 variation of tau
    int n_bases() const { return static_cast<int>(group.gens.size()); }
};

GroupShift make_group_shift(const schottky::SchottkyGroup& g, int table_cap = 512);

schottky::Word canonical_continuation(const schottky::SchottkyGroup& g, int base, int length);

// Sum of exp(kappa - theta * value(m)) * value(m)^j over integer m in
// [m_lo, m_hi], 1 <= m_lo <= m_hi, where value is smooth in m. Direct
// summation near the head, Euler-Maclaurin beyond.
struct Moments {
    double s0 = 0;  // sum of weights
    double s1 = 0;  // sum of value * weight
};

Moments weighted_moments(const std::function<double(double)>& value, double theta, double kappa,
                         double m_lo, double m_hi);

inline constexpr double kHugeTruncation = 1e280;

}  // namespace geoflow::models
