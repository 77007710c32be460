#include "geoflow/shift.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace geoflow::shift {

using models::GroupShift;

TruncatedAlphabet truncate(const GroupShift& gs, long long M) {
    TruncatedAlphabet a;
    a.n_bases = gs.n_bases();
    for (int b = 0; b < a.n_bases; ++b)
        for (long long m = 1; m <= M; ++m) {
            a.letters.push_back({b, m});
            a.letters.push_back({b, -m});
        }
    return a;
}

namespace {

// Perron root of a small nonnegative irreducible matrix; iterate R + I so
// periodic transition structure still converges.
double perron_root(const std::vector<std::vector<double>>& R, double tol, int max_iter = 200000) {
    size_t n = R.size();
    std::vector<double> v(n, 1.0), w(n, 0.0);
    double lambda = 0;
    for (int it = 0; it < max_iter; ++it) {
        double norm = 0;
        for (size_t i = 0; i < n; ++i) {
            double s = v[i];
            for (size_t j = 0; j < n; ++j) s += R[i][j] * v[j];
            w[i] = s;
            norm = std::max(norm, s);
        }
        double lo = std::numeric_limits<double>::infinity(), hi = 0;
        for (size_t i = 0; i < n; ++i) {
            if (v[i] > 0) {
                double r = w[i] / v[i];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
            v[i] = w[i] / norm;
        }
        lambda = 0.5 * (lo + hi);
        if (hi - lo <= tol * std::max(1.0, lambda)) break;
    }
    return lambda - 1.0;
}

struct ReducedMatrix {
    std::vector<std::vector<double>> R;
    bool ok = true;
    std::string why;
};

ReducedMatrix reduce_by_base(const TruncatedAlphabet& alph, const LetterPotential& phi) {
    ReducedMatrix out;
    std::vector<double> W(alph.n_bases, 0.0);
    std::vector<int> count(alph.n_bases, 0);
    for (const auto& l : alph.letters) {
        W[l.base] += std::exp(phi(l));
        ++count[l.base];
    }
    for (int b = 0; b < alph.n_bases; ++b)
        if (count[b] == 0) {
            out.ok = false;
            out.why = "base " + std::to_string(b) + " has no letters";
            return out;
        }
    if (alph.restrict_transitions && alph.n_bases < 2) {
        out.ok = false;
        out.why = "transition rule base(next) != base(current) needs at least two bases";
        return out;
    }
    out.R.assign(alph.n_bases, std::vector<double>(alph.n_bases, 0.0));
    for (int a = 0; a < alph.n_bases; ++a)
        for (int b = 0; b < alph.n_bases; ++b)
            if (!alph.restrict_transitions || a != b) out.R[a][b] = W[b];
    return out;
}

}  // namespace

PressureEstimate spectral_pressure(const TruncatedAlphabet& alph, const LetterPotential& phi,
                                   double tol) {
    auto red = reduce_by_base(alph, phi);
    if (!red.ok)
        throw std::runtime_error("spectral_pressure: non-irreducible truncation: " + red.why);
    PressureEstimate pe;
    pe.value = std::log(perron_root(red.R, tol));
    pe.truncation = static_cast<double>(alph.letters.size());
    pe.method = "spectral";
    pe.error = 10 * tol;
    return pe;
}

PressureEstimate spectral_pressure_depth2(const TruncatedAlphabet& alph, const PairPotential& phi,
                                          double tol) {
    size_t L = alph.letters.size();
    if (L > 5000)
        throw std::runtime_error("spectral_pressure_depth2: alphabet too large for the pair lift");
    std::vector<std::vector<double>> Q(L, std::vector<double>(L, 0.0));
    for (size_t i = 0; i < L; ++i)
        for (size_t j = 0; j < L; ++j) {
            if (alph.restrict_transitions && alph.letters[i].base == alph.letters[j].base) continue;
            Q[i][j] = std::exp(phi(alph.letters[i], alph.letters[j]));
        }
    PressureEstimate pe;
    pe.value = std::log(perron_root(Q, tol));
    pe.truncation = static_cast<double>(L);
    pe.method = "spectral-depth2";
    pe.error = 10 * tol;
    return pe;
}

PressureEstimate periodic_pressure(const TruncatedAlphabet& alph, const LetterPotential& phi,
                                   int n_max, int pin_index) {
    size_t L = alph.letters.size();
    if (L > 200 || n_max > 16)
        throw std::runtime_error("periodic_pressure: intended for small diagnostic systems");
    if (pin_index < 0 || static_cast<size_t>(pin_index) >= L)
        throw std::runtime_error("periodic_pressure: bad pin index");
    std::vector<double> lphi(L);
    for (size_t j = 0; j < L; ++j) lphi[j] = phi(alph.letters[j]);
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> lv(L, ninf), nxt(L, ninf);
    lv[pin_index] = 0.0;
    std::vector<double> logZ(n_max + 1, ninf);
    for (int n = 1; n <= n_max; ++n) {
        for (size_t j = 0; j < L; ++j) {
            double best = ninf;
            for (size_t i = 0; i < L; ++i) {
                if (alph.restrict_transitions && alph.letters[i].base == alph.letters[j].base)
                    continue;
                best = std::max(best, lv[i]);
            }
            if (best == ninf) {
                nxt[j] = ninf;
                continue;
            }
            double acc = 0;
            for (size_t i = 0; i < L; ++i) {
                if (alph.restrict_transitions && alph.letters[i].base == alph.letters[j].base)
                    continue;
                if (lv[i] > ninf) acc += std::exp(lv[i] - best);
            }
            nxt[j] = lphi[j] + best + std::log(acc);
        }
        lv = nxt;
        logZ[n] = lv[pin_index];
    }
    // the n_max-th slope of log Z_n, stepping over parity gaps
    int n1 = -1, d = 0;
    for (int n = n_max; n >= 1 && n1 < 0; --n)
        if (logZ[n] > ninf) n1 = n;
    if (n1 < 0) throw std::runtime_error("periodic_pressure: no returning orbits found");
    for (int step : {1, 2})
        if (n1 - step >= 1 && logZ[n1 - step] > ninf) {
            d = step;
            break;
        }
    PressureEstimate pe;
    pe.truncation = static_cast<double>(L);
    pe.method = "periodic-orbit";
    if (d == 0) {
        pe.value = logZ[n1] / n1;
        pe.error = std::abs(pe.value);
        return pe;
    }
    pe.value = (logZ[n1] - logZ[n1 - d]) / d;
    double prev = (n1 - d - 1 >= 1 && logZ[n1 - d - 1] > ninf && logZ[n1 - 1] > ninf)
                      ? (logZ[n1 - 1] - logZ[n1 - d - 1]) / d
                      : logZ[n1] / n1;
    pe.error = std::abs(pe.value - prev) + std::pow(2.0, -n1);
    return pe;
}

double LinearForm::eval(const GroupShift& gs, int base, double m) const {
    double am = std::abs(m);
    const auto& segs = per_base.at(base);
    const PotentialSegment* seg = &segs.front();
    for (const auto& s : segs)
        if (am >= s.from_abs_m) seg = &s;
    return seg->kappa - seg->theta * gs.roof[base].tau(m);
}

LinearForm LinearForm::zero(int n_bases) {
    LinearForm f;
    f.per_base.assign(n_bases, {PotentialSegment{1, 0, 0}});
    return f;
}

LinearForm LinearForm::roof_multiple(int n_bases, double coef) {
    LinearForm f;
    f.per_base.assign(n_bases, {PotentialSegment{1, -coef, 0}});
    return f;
}

LinearForm LinearForm::constant(int n_bases, double c) {
    LinearForm f;
    f.per_base.assign(n_bases, {PotentialSegment{1, 0, c}});
    return f;
}

namespace {

PotentialSegment segment_at(const std::vector<PotentialSegment>& segs, double m) {
    const PotentialSegment* cur = &segs.front();
    for (const auto& s : segs)
        if (m >= s.from_abs_m) cur = &s;
    return *cur;
}

}  // namespace

LinearForm operator+(const LinearForm& a, const LinearForm& b) {
    if (a.per_base.size() != b.per_base.size())
        throw std::invalid_argument("LinearForm: base count mismatch");
    LinearForm out;
    out.per_base.resize(a.per_base.size());
    for (size_t i = 0; i < a.per_base.size(); ++i) {
        std::set<double> cuts;
        for (const auto& s : a.per_base[i]) cuts.insert(s.from_abs_m);
        for (const auto& s : b.per_base[i]) cuts.insert(s.from_abs_m);
        for (double c : cuts) {
            auto sa = segment_at(a.per_base[i], c);
            auto sb = segment_at(b.per_base[i], c);
            out.per_base[i].push_back({c, sa.theta + sb.theta, sa.kappa + sb.kappa});
        }
    }
    return out;
}

LinearForm operator*(double s, const LinearForm& a) {
    LinearForm out = a;
    for (auto& segs : out.per_base)
        for (auto& seg : segs) {
            seg.theta *= s;
            seg.kappa *= s;
        }
    return out;
}

BaseSums base_sums(const GroupShift& gs, const LinearForm& phi, int base, double M,
                   const LinearForm* f_form) {
    BaseSums out;
    if (M < 1) return out;
    std::set<double> cuts;
    for (const auto& s : phi.per_base.at(base)) cuts.insert(s.from_abs_m);
    if (f_form)
        for (const auto& s : f_form->per_base.at(base)) cuts.insert(s.from_abs_m);
    cuts.insert(M + 1);
    double lo = 1;
    for (double hi : cuts) {
        if (hi <= lo) continue;
        double seg_hi = std::min(hi - 1, M);
        if (seg_hi < lo) break;
        auto sp = segment_at(phi.per_base.at(base), lo);
        for (int side : {+1, -1}) {
            auto tau = [&, side](double m) { return gs.roof[base].tau(side * m); };
            auto mom = models::weighted_moments(tau, sp.theta, sp.kappa, lo, seg_hi);
            out.W += mom.s0;
            out.T += mom.s1;
            out.G += sp.kappa * mom.s0 - sp.theta * mom.s1;
            if (f_form) {
                auto sf = segment_at(f_form->per_base.at(base), lo);
                out.F += sf.kappa * mom.s0 - sf.theta * mom.s1;
            }
        }
        lo = hi;
        if (lo > M) break;
    }
    return out;
}

namespace {

std::vector<std::vector<double>> reduced_matrix(const GroupShift& gs, const LinearForm& phi,
                                                double M, std::vector<BaseSums>* sums_out) {
    int n = gs.n_bases();
    std::vector<BaseSums> sums(n);
    for (int b = 0; b < n; ++b) sums[b] = base_sums(gs, phi, b, M);
    std::vector<std::vector<double>> R(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) R[a][b] = sums[b].W;
    if (sums_out) *sums_out = std::move(sums);
    return R;
}

}  // namespace

double truncated_pressure(const GroupShift& gs, const LinearForm& phi, double M) {
    auto R = reduced_matrix(gs, phi, M, nullptr);
    return std::log(perron_root(R, 1e-13));
}

num::SeriesVerdict base_series_verdict(const GroupShift& gs, const LinearForm& phi, int base,
                                       double m_max, double eta) {
    auto block_sum = [&](double lo, double hi) {
        double acc = 0;
        const auto& segs = phi.per_base.at(base);
        std::vector<double> cuts{lo};
        for (const auto& s : segs)
            if (s.from_abs_m > lo && s.from_abs_m <= hi) cuts.push_back(s.from_abs_m);
        std::sort(cuts.begin(), cuts.end());
        cuts.push_back(hi + 1);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1] - 1;
            if (b < a) continue;
            auto sp = segment_at(segs, a);
            for (int side : {+1, -1}) {
                auto tau = [&, side](double m) { return gs.roof[base].tau(side * m); };
                acc += models::weighted_moments(tau, sp.theta, sp.kappa, a, b).s0;
            }
        }
        return acc;
    };
    return num::block_ratio_test(block_sum, 64, m_max, eta).verdict;
}

PressureEstimate gurevich_pressure(const GroupShift& gs, const LinearForm& phi,
                                   const GurevichOptions& opt) {
    PressureEstimate pe;
    pe.method = "gurevich-exhaustion";
    for (int b = 0; b < gs.n_bases(); ++b) {
        if (base_series_verdict(gs, phi, b, opt.verdict_m, opt.verdict_eta) ==
            num::SeriesVerdict::likely_divergent) {
            pe.divergent = true;
            pe.value = std::numeric_limits<double>::infinity();
            pe.truncation = opt.verdict_m;
            pe.method = "per-letter-series";
            return pe;
        }
    }
    double prev = -std::numeric_limits<double>::infinity();
    std::vector<double> increments;
    double M = opt.m0;
    double last = 0;
    while (true) {
        last = truncated_pressure(gs, phi, M);
        if (last > opt.divergence_cap) {
            pe.divergent = true;
            pe.value = std::numeric_limits<double>::infinity();
            pe.truncation = M;
            return pe;
        }
        if (std::isfinite(prev)) {
            double inc = last - prev;
            if (inc < -1e-9)
                throw std::runtime_error("gurevich_pressure: exhaustion not monotone");
            increments.push_back(inc);
            if (inc < opt.tol) break;
            size_t k = increments.size();
            if (k >= 3 && increments[k - 1] > opt.divergence_step &&
                increments[k - 2] > opt.divergence_step &&
                increments[k - 3] > opt.divergence_step) {
                pe.divergent = true;
                pe.value = std::numeric_limits<double>::infinity();
                pe.truncation = M;
                return pe;
            }
        }
        prev = last;
        if (M >= opt.m_max) break;
        M = std::min(M * M, opt.m_max);  // log-doubling exhaustion schedule
    }
    double complete = truncated_pressure(gs, phi, opt.m_max);
    pe.value = complete;
    pe.truncation = opt.m_max;
    double max_theta = 0;
    for (const auto& segs : phi.per_base)
        for (const auto& s : segs) max_theta = std::max(max_theta, std::abs(s.theta));
    pe.error = std::abs(complete - last) + opt.tol + max_theta * gs.v2_estimate;
    return pe;
}

StructuralReport structural_checks(const GroupShift& gs) {
    StructuralReport rep;
    int n = gs.n_bases();
    rep.bip = n >= 2;  // the finite base alphabet witnesses big images and preimages
    if (n < 3) {
        rep.mixing = false;
        rep.note = "base transition graph is bipartite for two bases (period 2)";
        return rep;
    }
    rep.mixing = true;
    for (long long m1 : {1LL, -3LL}) {
        for (long long m2 : {2LL, -1LL}) {
            int a1 = 0, a2 = 1, a3 = -1;
            for (int k = 0; k < n; ++k)
                if (k != a1 && k != a2) a3 = k;
            // connector fillers of every length give words of both parities
            for (int fill = 1; fill <= 6; ++fill) {
                schottky::Word w{{a1, m1}};
                for (int j = 0; j < fill; ++j) w.push_back({j % 2 == 0 ? a3 : a1, 1});
                w.push_back({a2, m2});
                if (!schottky::is_reduced(w)) {
                    rep.mixing = false;
                    rep.note = "connector word construction failed";
                    return rep;
                }
                rep.connectors.push_back(w);
            }
        }
    }
    return rep;
}

MeasureData equilibrium(const GroupShift& gs, const LinearForm& phi, double M,
                        const LinearForm* deltaf) {
    int n = gs.n_bases();
    std::vector<BaseSums> sums(n);
    for (int b = 0; b < n; ++b) sums[b] = base_sums(gs, phi, b, M, deltaf);
    std::vector<std::vector<double>> R(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b) R[a][b] = sums[b].W;
    double lambda = perron_root(R, 1e-14);

    // right vector R_a and the left reduction y_b = W_b V_b, iterated with a
    // +I shift so the two-base (period two) case converges
    std::vector<double> Rv(n, 1.0), y(n, 1.0);
    for (int it = 0; it < 50000; ++it) {
        std::vector<double> nr(n, 0.0), ny(n, 0.0);
        for (int a = 0; a < n; ++a) {
            nr[a] = Rv[a];
            ny[a] = y[a];
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (b != a) {
                    nr[a] += sums[b].W * Rv[b];
                    ny[b] += sums[b].W * y[a];
                }
        double mr = *std::max_element(nr.begin(), nr.end());
        double my = *std::max_element(ny.begin(), ny.end());
        double dr = 0;
        for (int a = 0; a < n; ++a) {
            nr[a] /= mr;
            ny[a] /= my;
            dr = std::max(dr, std::abs(nr[a] - Rv[a]) + std::abs(ny[a] - y[a]));
            Rv[a] = nr[a];
            y[a] = ny[a];
        }
        if (dr < 1e-15 && it > 3) break;
    }
    std::vector<double> V(n);
    for (int b = 0; b < n; ++b) V[b] = y[b] / sums[b].W;

    MeasureData md;
    md.truncation = M;
    md.pressure = std::log(lambda);
    double Z = 0;
    for (int b = 0; b < n; ++b) Z += sums[b].W * V[b] * Rv[b];
    md.base_mass.resize(n);
    for (int b = 0; b < n; ++b) md.base_mass[b] = sums[b].W * V[b] * Rv[b] / Z;
    for (int b = 0; b < n; ++b) {
        md.tau_mean += V[b] * Rv[b] * sums[b].T / Z;
        if (deltaf) md.deltaf_mean += V[b] * Rv[b] * sums[b].F / Z;
    }
    double h = 0;
    for (int a = 0; a < n; ++a) {
        double inner = 0;
        for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            double p = sums[b].W * Rv[b] / (lambda * Rv[a]);
            inner += p * (sums[b].G / sums[b].W + std::log(Rv[b]) - std::log(lambda) -
                          std::log(Rv[a]));
        }
        h -= md.base_mass[a] * inner;
    }
    md.h_base = h;
    return md;
}

}  // namespace geoflow::shift
