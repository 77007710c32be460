#include <cstdio>
#include <cmath>
#include <functional>
#include <cstdint>
static int64_t evals = 0;
static double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}
static double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm); evals += 2;
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    if (depth <= 0) { if (evals % 1000000 < 2) printf("depth0: a=%.6g b=%.6g fa=%.3e fm=%.3e delta=%.3e tol=%.3e\n", a,b,fa,fm,delta,tol); return left + right + delta / 15.0; }
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}
int main(){
    setvbuf(stdout, nullptr, _IONBF, 0);
    // mimic the hyperbolic-base EM integrand: m from 4097 to 5000, theta=0.7, ell~3
    double ell = 2.9998, c = 0.64;
    auto f = [&](double m){ return std::exp(-0.7*(m*ell + c)); };
    auto g = [&](double u){ double m = std::exp(u); return f(m)*m; };
    double a = std::log(4097.0), b = std::log(5000.0);
    double fa = g(a), fb = g(b), fm = g(0.5*(a+b));
    double whole = simpson(a, fa, b, fb, fm);
    double scale = std::max({std::abs(whole), std::abs(fm)*(b-a), 1e-300});
    printf("fa=%.3e whole=%.3e scale=%.3e tol=%.3e\n", fa, whole, scale, 1e-10*scale);
    double r = adaptive(g, a, fa, b, fb, 0.5*(a+b), fm, whole, 1e-10*scale, 40);
    printf("result=%.6e evals=%lld\n", r, (long long)evals);
    return 0;
}
