#include "geoflow/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "geoflow/numerics.hpp"

namespace geoflow::schottky {

using hyp::BoundaryPoint;
using hyp::Complex;
using hyp::DiskPoint;
using hyp::Isometry;
using num::kPi;
using num::kTwoPi;
using num::wrap_angle;

Arc Arc::from_endpoints(double lo, double hi) {
    Arc a;
    a.lo = wrap_angle(lo);
    a.len = wrap_angle(hi - lo);
    if (a.len == 0) a.len = kTwoPi;
    return a;
}

double Arc::hi() const { return lo + len; }
double Arc::midpoint() const { return wrap_angle(lo + 0.5 * len); }

bool Arc::contains(double theta, double tol) const {
    double off = wrap_angle(theta - lo);
    return off <= len + tol || off >= kTwoPi - tol;
}

bool Arc::contains(const BoundaryPoint& xi, double tol) const { return contains(xi.angle(), tol); }

double Arc::depth(double theta) const {
    double off = wrap_angle(theta - lo);
    if (off > len) return 0.0;
    return std::min(off, len - off);
}

bool arcs_disjoint(const Arc& a, const Arc& b) {
    return !(a.contains(b.lo) || a.contains(wrap_angle(b.hi())) || b.contains(a.lo) ||
             b.contains(wrap_angle(a.hi())));
}

double arc_gap(const Arc& a, const Arc& b) {
    if (!arcs_disjoint(a, b)) return -1.0;
    double g1 = wrap_angle(b.lo - a.hi());
    double g2 = wrap_angle(a.lo - b.hi());
    return std::min(g1, g2);
}

bool is_reduced(const Word& w) {
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i].exp == 0) return false;
        if (i > 0 && w[i].base == w[i - 1].base) return false;
    }
    return true;
}

int SchottkyGroup::n1() const {
    int c = 0;
    for (const auto& g : gens) c += g.kind == GenKind::hyperbolic;
    return c;
}

int SchottkyGroup::n2() const { return static_cast<int>(gens.size()) - n1(); }

const Arc& SchottkyGroup::arc(int base, int sign) const {
    const auto& g = gens.at(base);
    if (g.kind == GenKind::parabolic || sign > 0) return g.arc_plus;
    return g.arc_minus;
}

Isometry SchottkyGroup::letter_iso(const Letter& l) const { return gens.at(l.base).iso.pow(l.exp); }

const Arc& SchottkyGroup::target_arc(const Letter& l) const {
    return arc(l.base, l.exp > 0 ? +1 : -1);
}

namespace {

struct SignedArc {
    int base;
    int sign;
    const Arc* arc;
};

std::vector<SignedArc> signed_arcs(const SchottkyGroup& g) {
    std::vector<SignedArc> out;
    for (int i = 0; i < static_cast<int>(g.gens.size()); ++i) {
        out.push_back({i, +1, &g.gens[i].arc_plus});
        if (g.gens[i].kind == GenKind::hyperbolic) out.push_back({i, -1, &g.gens[i].arc_minus});
    }
    return out;
}

// Image of an arc under a Mobius boundary homeomorphism, as an arc.
Arc map_arc(const Isometry& iso, const Arc& a) {
    double t1 = iso(BoundaryPoint::from_angle(a.lo)).angle();
    double t2 = iso(BoundaryPoint::from_angle(a.hi())).angle();
    double tm = iso(BoundaryPoint::from_angle(a.midpoint())).angle();
    Arc img = Arc::from_endpoints(t1, t2);
    if (!img.contains(tm)) img = Arc::from_endpoints(t2, t1);
    return img;
}

// slack of "image of `src` under iso lies inside `target`", in angle
double inclusion_margin(const SchottkyGroup& g, const Isometry& iso, const Arc& src,
                        const Arc& target, int grid) {
    double margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= grid; ++k) {
        double theta = src.lo + src.len * k / grid;
        double img = iso(BoundaryPoint::from_angle(theta)).angle();
        double off = wrap_angle(img - target.lo);
        double m = off <= target.len ? std::min(off, target.len - off) : -std::min(wrap_angle(img - target.hi()), wrap_angle(target.lo - img));
        margin = std::min(margin, m);
    }
    (void)g;
    return margin;
}

Arc complement_arc(const Arc& a) { return Arc::from_endpoints(a.hi(), a.lo); }

}  // namespace

ValidationReport validate(const SchottkyGroup& g, const ValidateOptions& opt) {
    ValidationReport rep;
    if (g.gens.size() < 2) {
        rep.c3 = {false, -1.0, "fewer than two generators"};
        return rep;
    }

    // C3: all arcs pairwise disjoint
    auto arcs = signed_arcs(g);
    double c3_margin = std::numeric_limits<double>::infinity();
    rep.c3.pass = true;
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = i + 1; j < arcs.size(); ++j) {
            double gap = arc_gap(*arcs[i].arc, *arcs[j].arc);
            if (gap < 0) {
                std::ostringstream os;
                os << "C3: arcs of " << g.gens[arcs[i].base].label << " and "
                   << g.gens[arcs[j].base].label << " overlap";
                rep.c3 = {false, -1.0, os.str()};
            }
            c3_margin = std::min(c3_margin, gap);
        }
    }
    if (rep.c3.pass) rep.c3.margin = c3_margin;
    if (!rep.c3.pass) return rep;

    // C1: h(complement of C_{h^{-1}}) inside C_h, both directions
    rep.c1.pass = true;
    rep.c1.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(g.gens.size()); ++i) {
        const auto& gen = g.gens[i];
        if (gen.kind != GenKind::hyperbolic) continue;
        auto cls = hyp::classify(gen.iso);
        if (cls.kind != hyp::IsoKind::hyperbolic) {
            rep.c1 = {false, -1.0, "C1: generator " + gen.label + " is not hyperbolic"};
            return rep;
        }
        if (!gen.arc_plus.contains(cls.fixed[0]) || !gen.arc_minus.contains(cls.fixed[1])) {
            rep.c1 = {false, -1.0,
                      "C1: fixed points of " + gen.label + " not interior to its arcs"};
            return rep;
        }
        double m_fwd = inclusion_margin(g, gen.iso, complement_arc(gen.arc_minus), gen.arc_plus,
                                        opt.boundary_grid);
        double m_bwd = inclusion_margin(g, gen.iso.inverse(), complement_arc(gen.arc_plus),
                                        gen.arc_minus, opt.boundary_grid);
        double m = std::min(m_fwd, m_bwd);
        if (m <= 0) {
            std::ostringstream os;
            os << "C1: generator " << gen.label << " fails ping-pong inclusion (margin " << m
               << ")";
            rep.c1 = {false, m, os.str()};
            return rep;
        }
        rep.c1.margin = std::min(rep.c1.margin, m);
    }

    // C2: p^n(complement of C_p) inside C_p for |n| <= cap, plus nesting
    rep.c2.pass = true;
    rep.c2.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(g.gens.size()); ++i) {
        const auto& gen = g.gens[i];
        if (gen.kind != GenKind::parabolic) continue;
        auto cls = hyp::classify(gen.iso);
        if (cls.kind != hyp::IsoKind::parabolic) {
            rep.c2 = {false, -1.0, "C2: generator " + gen.label + " is not parabolic"};
            return rep;
        }
        if (!gen.arc_plus.contains(cls.fixed[0])) {
            rep.c2 = {false, -1.0, "C2: fixed point of " + gen.label + " outside its arc"};
            return rep;
        }
        Arc comp = complement_arc(gen.arc_plus);
        double fixed_angle = cls.fixed[0].angle();
        double prev_spread = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= opt.parabolic_power_check; ++n) {
            for (int sign : {+1, -1}) {
                Isometry pn = gen.iso.pow(sign * n);
                double m = inclusion_margin(g, pn, comp, gen.arc_plus,
                                            std::max(64, opt.boundary_grid / 16));
                if (m <= 0) {
                    std::ostringstream os;
                    os << "C2: generator " << gen.label << " fails at power " << sign * n
                       << " (margin " << m << ")";
                    rep.c2 = {false, m, os.str()};
                    return rep;
                }
                if (n == 1) rep.c2.margin = std::min(rep.c2.margin, m);
            }
            // nesting: images contract toward the fixed point as |n| grows
            Arc img = map_arc(gen.iso.pow(n), comp);
            double spread = std::max(wrap_angle(fixed_angle - img.lo),
                                     wrap_angle(img.hi() - fixed_angle));
            spread = std::min(spread, kTwoPi - spread);
            if (n > 2 && spread > prev_spread + 1e-12) {
                rep.c2 = {false, -spread, "C2: images of " + gen.label + " are not nested"};
                return rep;
            }
            prev_spread = spread;
        }
    }
    return rep;
}

double check_c5(const SchottkyGroup& g, int grid_per_arc) {
    double margin = std::numeric_limits<double>::infinity();
    auto arcs = signed_arcs(g);
    for (const auto& sa : arcs) {
        for (int b2 = 0; b2 < static_cast<int>(g.gens.size()); ++b2) {
            if (b2 == sa.base) continue;
            for (int s2 : {+1, -1}) {
                Isometry a2 = g.gens[b2].iso.pow(s2);
                for (int k = 0; k <= grid_per_arc; ++k) {
                    double theta = sa.arc->lo + sa.arc->len * k / grid_per_arc;
                    double v = hyp::busemann_orbit(a2, BoundaryPoint::from_angle(theta));
                    margin = std::min(margin, v);
                }
            }
        }
    }
    return margin;
}

SchottkyGroup power_up(const SchottkyGroup& g, int N) {
    SchottkyGroup out = g;
    for (auto& gen : out.gens) gen.iso = gen.iso.pow(N);
    out.triangle_C = 0;
    out.c5_margin = 0;
    return out;
}

hyp::BoundaryPoint word_limit(const SchottkyGroup& g, const Word& w, double* residual_diam) {
    if (!is_reduced(w)) throw CodingError("word_limit: word is not reduced");
    if (w.empty()) {
        if (residual_diam) *residual_diam = kTwoPi;
        return g.xi0;
    }
    Isometry prefix = Isometry::identity();
    for (size_t i = 0; i + 1 < w.size(); ++i) prefix = prefix * g.letter_iso(w[i]);
    if (residual_diam) {
        Arc img = map_arc(prefix, g.target_arc(w.back()));
        *residual_diam = img.len;
    }
    prefix = prefix * g.letter_iso(w.back());
    return prefix(g.xi0);
}

Word code_point(const SchottkyGroup& g, BoundaryPoint xi, int depth, long long exponent_cap) {
    Word out;
    auto arcs = signed_arcs(g);
    std::vector<hyp::BoundaryPoint> fixed_pts;
    for (const auto& gen : g.gens) {
        auto cls = hyp::classify(gen.iso);
        for (const auto& f : cls.fixed) fixed_pts.push_back(f);
    }
    for (int step = 0; step < depth; ++step) {
        for (const auto& f : fixed_pts)
            if (std::abs(f.u - xi.u) < 1e-9)
                throw CodingError("code_point: excluded point (orbit of a generator fixed point)");
        const SignedArc* in = nullptr;
        for (const auto& sa : arcs)
            if (sa.arc->contains(xi)) {
                in = &sa;
                break;
            }
        if (!in) {
            if (step == 0) throw CodingError("code_point: point not in any arc (outside coded limit set sample)");
            throw CodingError("code_point: orbit left the coded limit set sample at depth " +
                              std::to_string(step));
        }
        const auto& gen = g.gens[in->base];
        long long m = 0;
        if (gen.kind == GenKind::hyperbolic) {
            Isometry peel = gen.iso.pow(-in->sign);
            BoundaryPoint cur = xi;
            for (long long j = 1;; ++j) {
                if (j > exponent_cap)
                    throw CodingError("code_point: excluded point (orbit of a fixed point)");
                cur = peel(cur);
                if (!in->arc->contains(cur)) {
                    if (g.arc(in->base, -in->sign).contains(cur))
                        throw CodingError("code_point: peeled point landed in the paired arc");
                    m = in->sign * j;
                    xi = cur;
                    break;
                }
            }
        } else {
            Isometry fwd = gen.iso;           // candidate m < 0
            Isometry bwd = gen.iso.inverse(); // candidate m > 0
            BoundaryPoint cf = xi, cb = xi;
            for (long long j = 1;; ++j) {
                if (j > exponent_cap)
                    throw CodingError("code_point: excluded point (orbit of a fixed point)");
                cb = bwd(cb);
                if (!in->arc->contains(cb)) {
                    m = j;
                    xi = cb;
                    break;
                }
                cf = fwd(cf);
                if (!in->arc->contains(cf)) {
                    m = -j;
                    xi = cf;
                    break;
                }
            }
        }
        out.push_back({in->base, m});
    }
    return out;
}

double roof(const SchottkyGroup& g, const Word& w, int depth, double* error_bound) {
    if (w.empty() || !is_reduced(w)) throw CodingError("roof: need a nonempty reduced word");
    Word tail(w.begin() + 1, w.end());
    // pad with an admissible alternating continuation up to `depth` letters
    while (static_cast<int>(tail.size()) + 1 < depth) {
        int prev = tail.empty() ? w.front().base : tail.back().base;
        int next = (prev + 1) % static_cast<int>(g.gens.size());
        tail.push_back({next, 1});
    }
    if (tail.empty()) tail.push_back({(w.front().base + 1) % static_cast<int>(g.gens.size()), 1});
    double resid = 0;
    BoundaryPoint xi_tail = word_limit(g, tail, &resid);
    Isometry unwind = g.letter_iso({w.front().base, -w.front().exp});
    double tau = hyp::busemann_orbit(unwind, xi_tail);
    if (error_bound) {
        // spread of the Busemann value over the residual arc
        Isometry prefix = Isometry::identity();
        for (size_t i = 0; i + 1 < tail.size(); ++i) prefix = prefix * g.letter_iso(tail[i]);
        Arc img = map_arc(prefix, g.target_arc(tail.back()));
        double v0 = hyp::busemann_orbit(unwind, BoundaryPoint::from_angle(img.lo));
        double v1 = hyp::busemann_orbit(unwind, BoundaryPoint::from_angle(img.hi()));
        double vm = hyp::busemann_orbit(unwind, BoundaryPoint::from_angle(img.midpoint()));
        *error_bound = std::max({v0, v1, vm}) - std::min({v0, v1, vm});
    }
    if (tau <= 0)
        throw std::runtime_error("roof: nonpositive return time; horoball separation (C5) violated");
    return tau;
}

namespace {

// interior samples of the geodesic with boundary endpoints u, v
std::vector<DiskPoint> geodesic_samples(Complex u, Complex v, int count) {
    std::vector<DiskPoint> out;
    double denom = 1.0 + (u * std::conj(v)).real();
    if (std::abs(denom) < 1e-12) {
        // diameter
        for (int k = 1; k < count; ++k) {
            double t = -1.0 + 2.0 * k / count;
            out.push_back(DiskPoint{u * t * 0.999999});
        }
        return out;
    }
    Complex c = (u + v) / denom;
    double r = std::sqrt(std::max(std::norm(c) - 1.0, 0.0));
    double a1 = std::arg(u - c), a2 = std::arg(v - c);
    double delta = wrap_angle(a2 - a1);
    if (delta > kPi) {
        std::swap(a1, a2);
        delta = kTwoPi - delta;
    }
    // geometric spacing biased toward the endpoints to catch the deep sup
    for (int k = 1; k < count; ++k) {
        double t = static_cast<double>(k) / count;
        double s = 0.5 * (1.0 + std::tanh(6.0 * (t - 0.5)) / std::tanh(3.0));
        Complex z = c + std::polar(r, a1 + delta * s);
        if (std::abs(z) < 1.0 - 1e-9) out.push_back(DiskPoint{z});
    }
    return out;
}

}  // namespace

double triangle_constant(const SchottkyGroup& g, const TriangleOptions& opt) {
    auto arcs = signed_arcs(g);
    std::vector<std::vector<DiskPoint>> hull_samples(arcs.size());
    for (size_t i = 0; i < arcs.size(); ++i) {
        Complex u = BoundaryPoint::from_angle(arcs[i].arc->lo).u;
        Complex v = BoundaryPoint::from_angle(arcs[i].arc->hi()).u;
        hull_samples[i] = geodesic_samples(u, v, opt.geodesic_samples);
        const auto& gen = g.gens[arcs[i].base];
        for (int m = 1; m <= opt.orbit_power_cap; ++m) {
            long long e = arcs[i].sign * static_cast<long long>(m);
            auto pt = gen.iso.pow(e)(hyp::origin());
            if (hyp::nearly_boundary(pt, 1e-12)) break;
            hull_samples[i].push_back(pt);
            if (gen.kind == GenKind::parabolic)
                hull_samples[i].push_back(gen.iso.pow(-e)(hyp::origin()));
        }
    }
    DiskPoint o = hyp::origin();
    double worst = 0.0;
    for (size_t i = 0; i < arcs.size(); ++i) {
        for (size_t j = 0; j < arcs.size(); ++j) {
            if (arcs[i].base == arcs[j].base) continue;
            for (const auto& x : hull_samples[i]) {
                double dx = hyp::distance(x, o);
                for (const auto& y : hull_samples[j]) {
                    double defect = dx + hyp::distance(y, o) - hyp::distance(x, y);
                    worst = std::max(worst, defect);
                }
            }
        }
    }
    return worst * opt.safety_factor;
}

hyp::BoundaryPoint default_xi0(const std::vector<GeneratorSpec>& gens) {
    std::vector<const Arc*> arcs;
    for (const auto& g : gens) {
        arcs.push_back(&g.arc_plus);
        if (g.kind == GenKind::hyperbolic) arcs.push_back(&g.arc_minus);
    }
    std::vector<double> his;
    for (const auto* a : arcs) his.push_back(wrap_angle(a->hi()));
    double best_gap = -1, best_mid = 0;
    for (size_t i = 0; i < arcs.size(); ++i) {
        double gap = kTwoPi;
        for (size_t j = 0; j < arcs.size(); ++j) {
            double d = wrap_angle(arcs[j]->lo - his[i]);
            if (d > 1e-15 && d < gap) gap = d;
        }
        if (gap > best_gap && gap < kTwoPi) {
            best_gap = gap;
            best_mid = wrap_angle(his[i] + 0.5 * gap);
        }
    }
    return BoundaryPoint::from_angle(best_mid);
}

SchottkyGroup prepare(SchottkyGroup g, const ValidateOptions& opt) {
    auto rep = validate(g, opt);
    if (!rep.pass()) {
        std::string why = !rep.c1.pass ? rep.c1.detail : (!rep.c2.pass ? rep.c2.detail : rep.c3.detail);
        throw std::runtime_error("prepare: group rejected: " + why);
    }
    if (std::abs(g.xi0.u) < 0.5) g.xi0 = default_xi0(g.gens);
    bool covered = false;
    for (const auto& gen : g.gens) {
        if (gen.arc_plus.contains(g.xi0)) covered = true;
        if (gen.kind == GenKind::hyperbolic && gen.arc_minus.contains(g.xi0)) covered = true;
    }
    if (covered) throw std::runtime_error("prepare: xi0 lies inside an arc");
    g.c5_margin = check_c5(g);
    g.triangle_C = triangle_constant(g);
    return g;
}

namespace {

constexpr double deg = kPi / 180.0;

// isometry taking the diameter (-1, 1) to the geodesic with endpoints
// exp(i(psi -+ phi)), preserving orientation (+1 -> exp(i(psi + phi)))
Isometry axis_placement(double psi, double phi) {
    double rho = (1.0 - std::sin(phi)) / std::cos(phi);
    return Isometry::translation_to(std::polar(rho, psi)) * Isometry::rotation(psi + kPi / 2);
}

}  // namespace

SchottkyGroup figure1_group(double ell, double parabolic_shift) {
    // hyperbolic axis endpoints at 223.5 and 316.5 degrees, parabolic cusp at 90
    double th_rep = 223.5 * deg, th_att = 316.5 * deg;
    double psi = 0.5 * (th_rep + th_att), phi = 0.5 * (th_att - th_rep);
    Isometry S = axis_placement(psi, phi);
    Isometry dil = Isometry::from_halfplane(std::exp(ell / 2), 0, 0, std::exp(-ell / 2));
    GeneratorSpec h;
    h.label = "h";
    h.kind = GenKind::hyperbolic;
    h.iso = S * dil * S.inverse();
    h.arc_plus = Arc::from_endpoints(290 * deg, 343 * deg);
    h.arc_minus = Arc::from_endpoints(197 * deg, 250 * deg);

    GeneratorSpec p;
    p.label = "p";
    p.kind = GenKind::parabolic;
    p.iso = Isometry::rotation(kPi / 2) *
            Isometry::from_halfplane(1, parabolic_shift, 0, 1) * Isometry::rotation(-kPi / 2);
    p.arc_plus = Arc::from_endpoints(28 * deg, 152 * deg);

    SchottkyGroup g;
    g.gens = {h, p};
    g.xi0 = default_xi0(g.gens);
    return prepare(std::move(g));
}

SchottkyGroup two_cusps_group(double ell, double parabolic_shift) {
    GeneratorSpec h;
    h.label = "h";
    h.kind = GenKind::hyperbolic;
    h.iso = Isometry::from_halfplane(std::exp(ell / 2), 0, 0, std::exp(-ell / 2));
    h.arc_plus = Arc::from_endpoints(-25 * deg, 25 * deg);
    h.arc_minus = Arc::from_endpoints(155 * deg, 205 * deg);

    Isometry base = Isometry::from_halfplane(1, parabolic_shift, 0, 1);
    GeneratorSpec p1;
    p1.label = "p";
    p1.kind = GenKind::parabolic;
    p1.iso = Isometry::rotation(kPi / 2) * base * Isometry::rotation(-kPi / 2);
    p1.arc_plus = Arc::from_endpoints(60 * deg, 120 * deg);

    GeneratorSpec p2;
    p2.label = "q";
    p2.kind = GenKind::parabolic;
    p2.iso = Isometry::rotation(-kPi / 2) * base * Isometry::rotation(kPi / 2);
    p2.arc_plus = Arc::from_endpoints(240 * deg, 300 * deg);

    SchottkyGroup g;
    g.gens = {h, p1, p2};
    g.xi0 = default_xi0(g.gens);
    return prepare(std::move(g));
}

}  // namespace geoflow::schottky
