#include "geoflow/numerics.hpp"

#include <algorithm>

namespace geoflow::num {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 int max_depth) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    double scale = std::max({std::abs(whole), std::abs(fm) * std::abs(b - a), 1e-300});
    return adaptive(f, a, fa, b, fb, m, fm, whole, rel_tol * scale, max_depth);
}

double euler_maclaurin_sum(const std::function<double(double)>& f, double m0, double m1,
                           double rel_tol) {
    if (m1 < m0) return 0.0;
    double n_terms = m1 - m0;
    if (n_terms <= 64) {
        if (m0 > 4e15)  // unit steps are below the fp resolution; f varies slowly here
            return (m1 - m0 + 1.0) * f(0.5 * (m0 + m1));
        double s = 0;
        for (double m = m0; m <= m1 + 0.5; m += 1.0) s += f(m);
        return s;
    }
    // Integrate in u = log(m); the integrands here vary slowly on that scale.
    auto g = [&](double u) {
        double m = std::exp(u);
        return f(m) * m;
    };
    double integral = integrate(g, std::log(m0), std::log(m1), rel_tol);
    double h = 1e-3 * std::max(1.0, m0 * 1e-6);
    auto df = [&](double m) { return (f(m + h) - f(m - h)) / (2.0 * h); };
    double h1 = 1e-3 * std::max(1.0, m1 * 1e-6);
    auto df1 = [&](double m) { return (f(m + h1) - f(m - h1)) / (2.0 * h1); };
    return integral + 0.5 * (f(m0) + f(m1)) + (df1(m1) - df(m0)) / 12.0;
}

RootResult decreasing_root(const std::function<double(double)>& f, double lo, double hi,
                           double x_tol, int max_iter) {
    double flo = f(lo), fhi = f(hi);
    RootResult r;
    r.evals = 2;
    if (!(flo > 0) || !(fhi < 0))
        throw std::runtime_error("decreasing_root: endpoints do not bracket a sign change");
    for (int it = 0; it < max_iter && hi - lo > x_tol; ++it) {
        // secant proposal, safeguarded to the middle half of the bracket
        double x = lo + (hi - lo) * flo / (flo - fhi);
        double mid = 0.5 * (lo + hi);
        double w = 0.25 * (hi - lo);
        x = std::clamp(x, mid - w, mid + w);
        double fx = f(x);
        ++r.evals;
        if (fx > 0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
    }
    r.lo = lo;
    r.hi = hi;
    r.root = 0.5 * (lo + hi);
    r.residual = f(r.root);
    ++r.evals;
    return r;
}

MinResult golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                          double x_tol, int max_iter) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < max_iter && (b - a) > x_tol; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    MinResult m;
    m.x = 0.5 * (a + b);
    m.value = f(m.x);
    return m;
}

BlockTrend block_ratio_test(const std::function<double(double, double)>& block_sum,
                            double m_start, double m_stop, double eta) {
    BlockTrend out;
    double lo = m_start;
    while (lo < m_stop) {
        double hi = std::min(2.0 * lo, m_stop);
        out.block_sums.push_back(block_sum(lo, hi - 1.0));
        lo = hi;
    }
    size_t n = out.block_sums.size();
    if (n < 4) {
        out.verdict = SeriesVerdict::inconclusive;
        return out;
    }
    // geometric mean of the trailing three ratios
    double prod = 1.0;
    int used = 0;
    for (size_t k = n - 3; k < n; ++k) {
        double prev = out.block_sums[k - 1], cur = out.block_sums[k];
        if (prev <= 0 || cur <= 0) {
            out.verdict = SeriesVerdict::likely_convergent;  // blocks underflowed to zero
            out.last_ratio = 0;
            return out;
        }
        prod *= cur / prev;
        ++used;
    }
    out.last_ratio = std::pow(prod, 1.0 / used);
    if (!std::isfinite(out.last_ratio)) {
        out.verdict = SeriesVerdict::likely_divergent;
        return out;
    }
    if (out.last_ratio >= 1.0 - eta)
        out.verdict = SeriesVerdict::likely_divergent;
    else
        out.verdict = SeriesVerdict::likely_convergent;
    return out;
}

}  // namespace geoflow::num
