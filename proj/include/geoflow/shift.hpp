#pragma once

#include <functional>
#include <string>
#include <vector>

#include "geoflow/models.hpp"
#include "geoflow/numerics.hpp"

namespace geoflow::shift {

struct LetterId {
    int base = 0;
    long long m = 1;
};

// Explicit finite subsystem K_M (or a hand-built diagnostic alphabet).
struct TruncatedAlphabet {
    int n_bases = 0;
    std::vector<LetterId> letters;
    bool restrict_transitions = true;  // base(next) != base(current)
};

TruncatedAlphabet truncate(const models::GroupShift& gs, long long M);

struct PressureEstimate {
    double value = 0;
    bool divergent = false;
    double truncation = 0;
    std::string method;
    double error = 0;
};

using LetterPotential = std::function<double(const LetterId&)>;
using PairPotential = std::function<double(const LetterId&, const LetterId&)>;

// log of the Perron root of Q(a,b) = exp(phi(b)) [admissible], through the
// base-reduced matrix R(a,b) = W(b) [b != a].
PressureEstimate spectral_pressure(const TruncatedAlphabet& alph, const LetterPotential& phi,
                                   double tol = 1e-12);

// depth-2 potentials by the letter-pair lift (small alphabets only)
PressureEstimate spectral_pressure_depth2(const TruncatedAlphabet& alph, const PairPotential& phi,
                                          double tol = 1e-12);

// defining periodic-orbit sums pinned to a starting cylinder; reports the
// n_max-th slope of log Z_n
PressureEstimate periodic_pressure(const TruncatedAlphabet& alph, const LetterPotential& phi,
                                   int n_max, int pin_index = 0);

// Potentials on the countable alphabet, linear in the roof on |m|-segments:
//   phi(b^m) = kappa - theta * tau_b(m)  for |m| >= from_abs_m (until the next segment)
struct PotentialSegment {
    double from_abs_m = 1;
    double theta = 0;
    double kappa = 0;
};

struct LinearForm {
    std::vector<std::vector<PotentialSegment>> per_base;

    double eval(const models::GroupShift& gs, int base, double m) const;
    static LinearForm zero(int n_bases);
    // coef * tau on every letter
    static LinearForm roof_multiple(int n_bases, double coef);
    static LinearForm constant(int n_bases, double c);
};

LinearForm operator+(const LinearForm& a, const LinearForm& b);
LinearForm operator*(double s, const LinearForm& a);

// per-base sums over 1 <= |m| <= M: W = sum e^phi, G = sum phi e^phi,
// T = sum tau e^phi, and optionally F = sum f e^phi for a second form
struct BaseSums {
    double W = 0, G = 0, T = 0, F = 0;
};

BaseSums base_sums(const models::GroupShift& gs, const LinearForm& phi, int base, double M,
                   const LinearForm* f_form = nullptr);

// pressure of the truncated subsystem K_M via the reduced base matrix
double truncated_pressure(const models::GroupShift& gs, const LinearForm& phi, double M);

num::SeriesVerdict base_series_verdict(const models::GroupShift& gs, const LinearForm& phi,
                                       int base, double m_max = 1e12, double eta = 1e-3);

struct GurevichOptions {
    double m0 = 64;
    double m_max = models::kHugeTruncation;
    double tol = 1e-9;
    double divergence_cap = 1e12;
    double divergence_step = 0.5;   // "growth not slowing": last three increments above this
    double verdict_m = 1e12;
    double verdict_eta = 1e-3;
};

// sup over the exhaustion K_{M_k}; divergence decided by the per-base series
// trend, the value cap, or unslowing growth
PressureEstimate gurevich_pressure(const models::GroupShift& gs, const LinearForm& phi,
                                   const GurevichOptions& opt = {});

struct StructuralReport {
    bool bip = false;
    bool mixing = false;
    std::vector<schottky::Word> connectors;
    std::string note;
};

StructuralReport structural_checks(const models::GroupShift& gs);

// Equilibrium eigendata of the weight matrix on K_M: the stationary Markov
// measure of the normalized chain, its entropy and its tau / Delta_f means.
struct MeasureData {
    std::vector<double> base_mass;
    double h_base = 0;
    double tau_mean = 0;
    double deltaf_mean = 0;
    double pressure = 0;  // log Perron root on K_M
    double truncation = 0;
};

MeasureData equilibrium(const models::GroupShift& gs, const LinearForm& phi, double M,
                        const LinearForm* deltaf = nullptr);

}  // namespace geoflow::shift
