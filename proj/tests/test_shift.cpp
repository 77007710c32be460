#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "geoflow/shift.hpp"

using namespace geoflow;
using namespace geoflow::shift;

namespace {

TruncatedAlphabet full_shift(int k) {
    TruncatedAlphabet a;
    a.n_bases = k;
    for (int b = 0; b < k; ++b) a.letters.push_back({b, 1});
    a.restrict_transitions = false;
    return a;
}

TruncatedAlphabet distinct_base_shift(int k) {
    TruncatedAlphabet a = full_shift(k);
    a.restrict_transitions = true;
    return a;
}

// independent dense Perron root for the test side
double brute_eigenvalue(const std::vector<std::vector<double>>& A, int iters = 4000) {
    size_t n = A.size();
    std::vector<double> v(n, 1.0);
    double lambda = 0;
    for (int it = 0; it < iters; ++it) {
        std::vector<double> w(n, 0.0);
        for (size_t i = 0; i < n; ++i) {
            w[i] = v[i];
            for (size_t j = 0; j < n; ++j) w[i] += A[i][j] * v[j];
        }
        double norm = 0;
        for (double x : w) norm = std::max(norm, x);
        for (size_t i = 0; i < n; ++i) v[i] = w[i] / norm;
        lambda = norm;
    }
    return lambda - 1.0;
}

const models::GroupShift& fig1_shift() {
    static models::GroupShift gs = models::make_group_shift(schottky::figure1_group());
    return gs;
}

}  // namespace

TEST_CASE("spectral: full 2-shift with zero potential") {
    auto pe = spectral_pressure(full_shift(2), [](const LetterId&) { return 0.0; });
    CHECK(pe.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("spectral: three bases, equal weights, distinct-base rule") {
    double w = 0.37;
    auto phi = [&](const LetterId&) { return std::log(w); };
    auto pe = spectral_pressure(distinct_base_shift(3), phi);
    // brute-force eigenvalue of w (J - I)
    std::vector<std::vector<double>> A(3, std::vector<double>(3, w));
    for (int i = 0; i < 3; ++i) A[i][i] = 0;
    double oracle = std::log(brute_eigenvalue(A));
    CHECK(pe.value == doctest::Approx(std::log(2 * w)).epsilon(1e-10));
    CHECK(pe.value == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("spectral: full shift with letter weights sums them") {
    std::vector<double> ws{0.3, 1.7, 0.25, 0.4};
    auto a = full_shift(4);
    auto pe = spectral_pressure(a, [&](const LetterId& l) { return std::log(ws[l.base]); });
    CHECK(pe.value == doctest::Approx(std::log(0.3 + 1.7 + 0.25 + 0.4)).epsilon(1e-12));
}

TEST_CASE("spectral: rejects non-irreducible truncations") {
    TruncatedAlphabet a;
    a.n_bases = 1;
    a.letters = {{0, 1}, {0, 2}};
    a.restrict_transitions = true;
    CHECK_THROWS(spectral_pressure(a, [](const LetterId&) { return 0.0; }));
}

TEST_CASE("periodic: full 2-shift recovers log 2 and pin independence") {
    auto zero = [](const LetterId&) { return 0.0; };
    auto p0 = periodic_pressure(full_shift(2), zero, 12, 0);
    auto p1 = periodic_pressure(full_shift(2), zero, 12, 1);
    CHECK(std::abs(p0.value - std::log(2.0)) < 0.06);
    CHECK(std::abs(p0.value - p1.value) < 0.06);
}

TEST_CASE("periodic agrees with spectral on the 3-base system") {
    double w = 0.8;
    auto phi = [&](const LetterId&) { return std::log(w); };
    auto alph = distinct_base_shift(3);
    auto ps = spectral_pressure(alph, phi);
    auto pp = periodic_pressure(alph, phi, 12);
    CHECK(std::abs(ps.value - pp.value) < 0.06);
}

TEST_CASE("periodic handles the period-2 base structure") {
    // two bases with the distinct-base rule: only even return times exist
    auto alph = distinct_base_shift(2);
    auto pp = periodic_pressure(alph, [](const LetterId&) { return 0.0; }, 11);
    CHECK(pp.value == doctest::Approx(0.0).epsilon(1e-9));  // log 1: alternation is forced
}

TEST_CASE("base_sums matches direct summation across the tail threshold") {
    const auto& gs = fig1_shift();
    auto phi = LinearForm::roof_multiple(2, -0.7);  // -0.7 tau
    for (int b : {0, 1}) {
        for (double M : {37.0, 5000.0, 20000.0}) {
            double w_direct = 0, t_direct = 0;
            for (long long m = 1; m <= static_cast<long long>(M); ++m) {
                for (long long s : {m, -m}) {
                    double tau = gs.roof[b].tau(static_cast<double>(s));
                    double wt = std::exp(-0.7 * tau);
                    w_direct += wt;
                    t_direct += tau * wt;
                }
            }
            auto sums = base_sums(gs, phi, b, M);
            CHECK(sums.W == doctest::Approx(w_direct).epsilon(1e-8));
            CHECK(sums.T == doctest::Approx(t_direct).epsilon(1e-8));
            CHECK(sums.G == doctest::Approx(-0.7 * t_direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("gurevich: -t tau finite above 1/2, divergent below, zero potential divergent") {
    const auto& gs = fig1_shift();
    auto above = gurevich_pressure(gs, LinearForm::roof_multiple(2, -0.56));
    CHECK(!above.divergent);
    CHECK(std::isfinite(above.value));

    auto below = gurevich_pressure(gs, LinearForm::roof_multiple(2, -0.44));
    CHECK(below.divergent);

    auto zero = gurevich_pressure(gs, LinearForm::zero(2));
    CHECK(zero.divergent);
}

TEST_CASE("gurevich: exhaustion values are monotone in M") {
    const auto& gs = fig1_shift();
    auto phi = LinearForm::roof_multiple(2, -0.6);
    double prev = -1e300;
    for (double M : {16.0, 64.0, 512.0, 4096.0, 1e6, 1e12}) {
        double p = truncated_pressure(gs, phi, M);
        CHECK(p >= prev - 1e-12);
        prev = p;
    }
}

TEST_CASE("pressure is monotone in the potential and convex in t") {
    const auto& gs = fig1_shift();
    // monotone: phi <= psi pointwise => P(phi) <= P(psi)
    double p1 = truncated_pressure(gs, LinearForm::roof_multiple(2, -0.8), 4096);
    double p2 = truncated_pressure(gs, LinearForm::roof_multiple(2, -0.8) +
                                           LinearForm::constant(2, 0.3),
                                   4096);
    CHECK(p1 <= p2 + 1e-12);
    CHECK(p2 == doctest::Approx(p1 + 0.3).epsilon(1e-9));

    // convexity of t -> P(-t tau) on a grid
    std::vector<double> ts{0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.9, 1.0};
    std::vector<double> ps;
    for (double t : ts) ps.push_back(truncated_pressure(gs, LinearForm::roof_multiple(2, -t), 1e8));
    for (size_t i = 1; i + 1 < ps.size(); ++i) {
        double left = (ps[i] - ps[i - 1]) / (ts[i] - ts[i - 1]);
        double right = (ps[i + 1] - ps[i]) / (ts[i + 1] - ts[i]);
        CHECK(right >= left - 1e-8);
    }
}

TEST_CASE("series verdicts bracket the parabolic threshold tightly") {
    const auto& gs = fig1_shift();
    CHECK(base_series_verdict(gs, LinearForm::roof_multiple(2, -0.52), 1) ==
          num::SeriesVerdict::likely_convergent);
    CHECK(base_series_verdict(gs, LinearForm::roof_multiple(2, -0.48), 1) ==
          num::SeriesVerdict::likely_divergent);
    // hyperbolic base: geometric decay converges for any positive t
    CHECK(base_series_verdict(gs, LinearForm::roof_multiple(2, -0.05), 0) ==
          num::SeriesVerdict::likely_convergent);
}

TEST_CASE("structural checks: alphabet counts drive mixing") {
    auto r2 = structural_checks(fig1_shift());
    CHECK(r2.bip);
    CHECK(!r2.mixing);

    static models::GroupShift g3 = models::make_group_shift(schottky::two_cusps_group());
    auto r3 = structural_checks(g3);
    CHECK(r3.bip);
    CHECK(r3.mixing);
    CHECK(!r3.connectors.empty());
    // both parities appear among connector lengths
    bool even = false, odd = false;
    for (const auto& w : r3.connectors) {
        CHECK(schottky::is_reduced(w));
        (w.size() % 2 == 0 ? even : odd) = true;
    }
    CHECK(even);
    CHECK(odd);
}

TEST_CASE("equilibrium eigendata against a dense brute force") {
    const auto& gs = fig1_shift();
    double t = 0.8;
    long long M = 6;
    auto phi = LinearForm::roof_multiple(2, -t);
    auto deltaf = LinearForm::constant(2, 1.0);
    auto md = equilibrium(gs, phi, static_cast<double>(M), &deltaf);

    // dense chain on the 4M letters
    auto alph = truncate(gs, M);
    size_t L = alph.letters.size();
    std::vector<double> wvec(L), tauvec(L);
    for (size_t i = 0; i < L; ++i) {
        tauvec[i] = gs.roof[alph.letters[i].base].tau(static_cast<double>(alph.letters[i].m));
        wvec[i] = std::exp(-t * tauvec[i]);
    }
    std::vector<std::vector<double>> Q(L, std::vector<double>(L, 0.0));
    for (size_t i = 0; i < L; ++i)
        for (size_t j = 0; j < L; ++j)
            if (alph.letters[i].base != alph.letters[j].base) Q[i][j] = wvec[j];
    double lambda = brute_eigenvalue(Q);
    CHECK(md.pressure == doctest::Approx(std::log(lambda)).epsilon(1e-9));

    // dense left/right vectors
    std::vector<double> r(L, 1.0), u(L, 1.0);
    for (int it = 0; it < 6000; ++it) {
        std::vector<double> nr(L, 0.0), nu(L, 0.0);
        for (size_t i = 0; i < L; ++i)
            for (size_t j = 0; j < L; ++j) {
                nr[i] += Q[i][j] * r[j];
                nu[j] += u[i] * Q[i][j];
            }
        double mr = 0, mu = 0;
        for (size_t i = 0; i < L; ++i) {
            mr = std::max(mr, nr[i] + r[i]);
            mu = std::max(mu, nu[i] + u[i]);
        }
        for (size_t i = 0; i < L; ++i) {
            r[i] = (nr[i] + r[i]) / mr;
            u[i] = (nu[i] + u[i]) / mu;
        }
    }
    double Z = 0;
    for (size_t i = 0; i < L; ++i) Z += u[i] * r[i];
    double tau_mean = 0;
    for (size_t i = 0; i < L; ++i) tau_mean += u[i] * r[i] * tauvec[i] / Z;
    CHECK(md.tau_mean == doctest::Approx(tau_mean).epsilon(1e-8));

    // entropy via the chain formula on the dense system
    double h = 0;
    for (size_t i = 0; i < L; ++i) {
        double pi_i = u[i] * r[i] / Z;
        for (size_t j = 0; j < L; ++j) {
            if (Q[i][j] <= 0) continue;
            double pij = Q[i][j] * r[j] / (lambda * r[i]);
            h -= pi_i * pij * std::log(pij);
        }
    }
    CHECK(md.h_base == doctest::Approx(h).epsilon(1e-7));

    // variational identity h + int phi = P
    double int_phi = 0;
    for (size_t i = 0; i < L; ++i) int_phi += u[i] * r[i] * (-t * tauvec[i]) / Z;
    CHECK(md.h_base + int_phi == doctest::Approx(md.pressure).epsilon(1e-8));

    // Delta_f identically 1 integrates to 1
    CHECK(md.deltaf_mean == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("depth-2 pair lift agrees with depth-1 when the pair part is trivial") {
    const auto& gs = fig1_shift();
    auto alph = truncate(gs, 3);
    auto phi1 = [&](const LetterId& l) {
        return -0.9 * gs.roof[l.base].tau(static_cast<double>(l.m));
    };
    auto phi2 = [&](const LetterId& l, const LetterId&) { return phi1(l); };
    auto p1 = spectral_pressure(alph, phi1);
    auto p2 = spectral_pressure_depth2(alph, phi2);
    CHECK(p1.value == doctest::Approx(p2.value).epsilon(1e-9));
}
