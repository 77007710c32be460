#include "geoflow/models.hpp"

#include <cmath>
#include <stdexcept>

#include "geoflow/numerics.hpp"

namespace geoflow::models {

using hyp::Complex;
using hyp::Isometry;
using schottky::GenKind;

namespace {

// log |u + m v| stable for |m| up to 1e300
double log_abs_affine(Complex u, Complex v, double m) {
    double am = std::abs(m);
    if (am > 1e8) {
        Complex w = v + u / m;
        return std::log(am) + std::log(std::abs(w));
    }
    return std::log(std::abs(u + m * v));
}

bool is_parabolic_trace(const Isometry& g) { return std::abs(std::abs(g.trace()) - 2.0) < 1e-9; }

// nilpotent part N with g = +-(I + N)
void nilpotent_part(const Isometry& g, Complex& na, Complex& nb) {
    double sign = g.trace() >= 0 ? 1.0 : -1.0;
    na = sign * g.a - 1.0;
    nb = sign * g.b;
}

}  // namespace

double OrbitModel::dist(double m) const {
    if (m == 0) return 0;
    if (kind == GenKind::parabolic) {
        // d(o, g^m o) = 2 log(|a(m)| + |b(m)|), a(m) = 1 + m na, b(m) = m nb
        double la = log_abs_affine(Complex{1, 0}, na, m);
        double lb = std::log(std::abs(m)) + std::log(std::abs(nb));
        double hi = std::max(la, lb), lo = std::min(la, lb);
        return 2.0 * (hi + std::log1p(std::exp(lo - hi)));
    }
    double am = std::abs(m);
    const auto& table = m > 0 ? dist_pos : dist_neg;
    if (am <= table.size()) return table[static_cast<size_t>(am) - 1];
    return am * ell + (m > 0 ? dist_pos_c : dist_neg_c);
}

OrbitModel make_orbit_model(const Isometry& g, int table_cap) {
    OrbitModel om;
    auto cls = hyp::classify(g);
    if (cls.kind == hyp::IsoKind::parabolic || is_parabolic_trace(g)) {
        om.kind = GenKind::parabolic;
        nilpotent_part(g, om.na, om.nb);
        return om;
    }
    if (cls.kind != hyp::IsoKind::hyperbolic)
        throw std::invalid_argument("make_orbit_model: generator must be hyperbolic or parabolic");
    om.kind = GenKind::hyperbolic;
    om.ell = cls.translation_length;
    Isometry fwd = Isometry::identity(), bwd = Isometry::identity();
    for (int m = 1; m <= table_cap; ++m) {
        fwd = fwd * g;
        bwd = bwd * g.inverse();
        om.dist_pos.push_back(hyp::orbit_distance(fwd));
        om.dist_neg.push_back(hyp::orbit_distance(bwd));
    }
    om.dist_pos_c = om.dist_pos.back() - table_cap * om.ell;
    om.dist_neg_c = om.dist_neg.back() - table_cap * om.ell;
    return om;
}

double RoofModel::tau(double m) const {
    if (m == 0) throw std::invalid_argument("tau: zero exponent");
    if (kind == GenKind::parabolic) return 2.0 * log_abs_affine(P, Q, m);
    double am = std::abs(m);
    const auto& table = m > 0 ? tau_pos : tau_neg;
    if (am <= table.size()) return table[static_cast<size_t>(am) - 1];
    return am * ell + (m > 0 ? tau_pos_c : tau_neg_c);
}

schottky::Word canonical_continuation(const schottky::SchottkyGroup& g, int base, int length) {
    int n = static_cast<int>(g.gens.size());
    int c = (base + 1) % n;
    int d = -1;
    for (int k = 0; k < n; ++k)
        if (k != c && (n == 2 || k != base)) {
            d = k;
            break;
        }
    schottky::Word w;
    for (int j = 0; j < length; ++j) w.push_back({j % 2 == 0 ? c : d, 1});
    return w;
}

namespace {

RoofModel make_roof_model(const schottky::SchottkyGroup& g, int base, int table_cap) {
    RoofModel rm;
    const auto& gen = g.gens[base];
    auto word = canonical_continuation(g, base, 72);
    double resid = 0;
    hyp::BoundaryPoint xi = schottky::word_limit(g, word, &resid);
    if (gen.kind == GenKind::parabolic) {
        rm.kind = GenKind::parabolic;
        Complex na, nb;
        nilpotent_part(gen.iso, na, nb);
        // g^{-m} has entries a = 1 - m na, b = -m nb;
        // tau(m) = 2 log|conj(a) xi - b| = 2 log|xi + m (nb - conj(na) xi)|
        rm.P = xi.u;
        rm.Q = nb - std::conj(na) * xi.u;
        return rm;
    }
    rm.kind = GenKind::hyperbolic;
    rm.ell = hyp::classify(gen.iso).translation_length;
    Isometry fwd = Isometry::identity(), bwd = Isometry::identity();
    Isometry ginv = gen.iso.inverse();
    for (int m = 1; m <= table_cap; ++m) {
        fwd = fwd * ginv;   // (g^m)^{-1}
        bwd = bwd * gen.iso;
        rm.tau_pos.push_back(hyp::busemann_orbit(fwd, xi));
        rm.tau_neg.push_back(hyp::busemann_orbit(bwd, xi));
    }
    rm.tau_pos_c = rm.tau_pos.back() - table_cap * rm.ell;
    rm.tau_neg_c = rm.tau_neg.back() - table_cap * rm.ell;
    return rm;
}

double roof_with_continuation(const schottky::SchottkyGroup& g, int base, long long m,
                              const schottky::Word& tail) {
    double resid = 0;
    hyp::BoundaryPoint xi = schottky::word_limit(g, tail, &resid);
    return hyp::busemann_orbit(g.letter_iso({base, -m}), xi);
}

}  // namespace

GroupShift make_group_shift(const schottky::SchottkyGroup& g, int table_cap) {
    GroupShift gs;
    gs.group = g;
    int n = static_cast<int>(g.gens.size());
    for (int b = 0; b < n; ++b) {
        gs.orbit.push_back(make_orbit_model(g.gens[b].iso, table_cap));
        gs.roof.push_back(make_roof_model(g, b, table_cap));
    }
    double tmin = std::numeric_limits<double>::infinity();
    for (int b = 0; b < n; ++b)
        for (int m = 1; m <= 64; ++m) {
            tmin = std::min(tmin, gs.roof[b].tau(m));
            tmin = std::min(tmin, gs.roof[b].tau(-m));
        }
    gs.tau_min = tmin;
    if (tmin <= 0)
        throw std::runtime_error("make_group_shift: roof not bounded away from zero (C5 fails)");

    // depth-1 variation: fix the first two letters, vary the rest
    double v2 = 0;
    for (int b = 0; b < n; ++b) {
        auto canon = canonical_continuation(g, b, 40);
        for (long long m : {1LL, -1LL, 3LL}) {
            double base_val = roof_with_continuation(g, b, m, canon);
            for (long long k2 : {2LL, -1LL}) {
                schottky::Word alt = canon;
                for (size_t i = 1; i < alt.size(); ++i)
                    if (i % 2 == 1) alt[i].exp = k2;
                double v = roof_with_continuation(g, b, m, alt);
                v2 = std::max(v2, std::abs(v - base_val));
            }
        }
    }
    gs.v2_estimate = v2;
    return gs;
}

Moments weighted_moments(const std::function<double(double)>& value, double theta, double kappa,
                         double m_lo, double m_hi) {
    Moments out;
    if (m_hi < m_lo) return out;
    auto w = [&](double m) { return std::exp(kappa - theta * value(m)); };
    double direct_hi = m_lo > 1e15 ? m_lo - 1.0 : std::min(m_hi, std::max(m_lo + 4096.0, 4096.0));
    for (double m = m_lo; m <= direct_hi + 0.5; m += 1.0) {
        double v = value(m);
        double wm = std::exp(kappa - theta * v);
        out.s0 += wm;
        out.s1 += v * wm;
    }
    if (direct_hi >= m_hi) return out;
    double a = direct_hi + 1.0;
    out.s0 += num::euler_maclaurin_sum(w, a, m_hi);
    out.s1 += num::euler_maclaurin_sum([&](double m) { return value(m) * w(m); }, a, m_hi);
    return out;
}

}  // namespace geoflow::models
