#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace geoflow::num {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double wrap_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

// Adaptive Simpson quadrature.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10, int max_depth = 40);

// Euler-Maclaurin evaluation of sum_{m=m0}^{m1} f(m) for smooth slowly-varying f.
// Endpoint derivatives are taken by central differences. m0, m1 may exceed 2^53;
// f must accept real arguments.
double euler_maclaurin_sum(const std::function<double(double)>& f, double m0, double m1,
                           double rel_tol = 1e-10);

struct RootResult {
    double root = 0;
    double lo = 0, hi = 0;
    double residual = 0;
    int evals = 0;
};

// Bisection with secant acceleration on a decreasing function. Requires f(lo) > 0 > f(hi).
RootResult decreasing_root(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol, int max_iter = 200);

struct MinResult {
    double x = 0;
    double value = 0;
};

MinResult golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol, int max_iter = 200);

// Verdict of a numerical convergence test on a positive-term series, from the
// trend of dyadic block sums. Heuristic: the series behaves like sum m^{-q};
// the block ratio tends to 2^{1-q}, so ratios >= 1 - eta flag divergence.
enum class SeriesVerdict { likely_convergent, likely_divergent, inconclusive };

struct BlockTrend {
    std::vector<double> block_sums;   // dyadic blocks
    double last_ratio = 0;            // geometric mean of trailing ratios
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
};

BlockTrend block_ratio_test(const std::function<double(double, double)>& block_sum,
                            double m_start, double m_stop, double eta = 1e-3);

}  // namespace geoflow::num
