#include "nsratio/bessel.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "nsratio/errors.hpp"

namespace nsratio {

namespace detail {

double bessel_series(int order, double x) {
    // J_n(x) = sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!)
    const long double h = 0.5L * static_cast<long double>(x);
    const long double q = -h * h;
    long double term = (order == 0) ? 1.0L : h;
    long double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(k + order));
        sum += term;
        if (std::fabs(term) < 1e-22L * (1.0L + std::fabs(sum))) break;
    }
    return static_cast<double>(sum);
}

double bessel_recurrence(int order, double x) {
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    // Miller's algorithm: recur J_{k-1} = (2k/x) J_k - J_{k+1} downward from an
    // index well past x, normalize with J0 + 2 sum J_{2k} = 1.
    const long double lx = x;
    int start = static_cast<int>(x + 30.0 + 6.0 * std::sqrt(x));
    start += start % 2;
    long double next = 0.0L, cur = 1e-300L, j0 = 0.0L, j1 = 0.0L, norm = 0.0L;
    for (int k = start; k > 0; --k) {
        const long double prev = (2.0L * k / lx) * cur - next;
        next = cur;
        cur = prev;  // cur = J_{k-1}, next = J_k
        if (std::fabs(cur) > 1e250L) {
            cur *= 1e-250L;
            next *= 1e-250L;
            j1 *= 1e-250L;
            norm *= 1e-250L;
        }
        if (k - 1 == 1) j1 = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * cur;
    }
    j0 = cur;
    norm += j0;
    return static_cast<double>((order == 0 ? j0 : j1) / norm);
}

}  // namespace detail

double bessel_j0(double x) {
    x = std::abs(x);
    return x <= kBesselSeriesSwitch ? detail::bessel_series(0, x) : detail::bessel_recurrence(0, x);
}

double bessel_j1(double x) {
    const double s = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    return s * (x <= kBesselSeriesSwitch ? detail::bessel_series(1, x) : detail::bessel_recurrence(1, x));
}

double bessel_j0_prime(double x) { return -bessel_j1(x); }

double bessel_j1_prime(double x) {
    if (x == 0.0) return 0.5;
    return bessel_j0(x) - bessel_j1(x) / x;
}

namespace {

struct Bracket {
    double lo, hi;
};

// First sign change of f on (0, limit] scanning from `step` with the given step.
Bracket scan_first_sign_change(const std::function<double(double)>& f, double step, double limit) {
    double a = step;
    double fa = f(a);
    for (double b = a + step; b <= limit; b += step) {
        const double fb = f(b);
        if (fa == 0.0) return {a, a};
        if ((fa < 0.0) != (fb < 0.0)) return {a, b};
        a = b;
        fa = fb;
    }
    throw ComputationError("root scan: no sign change found below " + std::to_string(limit));
}

double bisect(const std::function<double(double)>& f, Bracket br, double tol) {
    double a = br.lo, b = br.hi;
    double fa = f(a);
    if (fa == 0.0) return a;
    while (b - a > tol) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

constexpr double kScanStep = 0.05;
constexpr double kBisectTol = 1e-13;

}  // namespace

double first_zero_j0() {
    const auto f = [](double x) { return bessel_j0(x); };
    return bisect(f, scan_first_sign_change(f, kScanStep, 10.0), 1e-15);
}

double first_zero_j1_prime() {
    const auto f = [](double x) { return bessel_j1_prime(x); };
    return bisect(f, scan_first_sign_change(f, kScanStep, 10.0), 1e-15);
}

double steklov_tent_equation(double sigma, double x0) {
    const double s = 2.0 * std::sqrt(sigma);
    const double a = s * x0, b = s * (1.0 - x0);
    return bessel_j0(a) * bessel_j0_prime(b) + bessel_j0(b) * bessel_j0_prime(a);
}

double neumann_tent_equation(double mu, double x0) {
    const double r = std::sqrt(mu);
    const double a = r * x0, b = r * (1.0 - x0);
    return bessel_j0(a) * bessel_j0_prime(b) + bessel_j0(b) * bessel_j0_prime(a);
}

namespace {

// The scan runs in the square-root variable, where consecutive roots are O(1) apart.
TranscendentalRoot tent_root(TentEquation eq, double x0) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw InputError("tent root: x0 must lie in (0,1)");
    const auto g = [&](double root) {
        return eq == TentEquation::SteklovTent ? steklov_tent_equation(root * root, x0)
                                               : neumann_tent_equation(root * root, x0);
    };
    const Bracket br = scan_first_sign_change(g, kScanStep, 200.0);
    const double r = bisect(g, br, kBisectTol);
    TranscendentalRoot out;
    out.value = r * r;
    out.equation = eq;
    out.x0 = x0;
    out.bracket = {br.lo * br.lo, br.hi * br.hi};
    out.residual = std::abs(g(r));
    return out;
}

}  // namespace

TranscendentalRoot sigma1_tent(double x0) { return tent_root(TentEquation::SteklovTent, x0); }
TranscendentalRoot mu1_tent(double x0) { return tent_root(TentEquation::NeumannTent, x0); }

}  // namespace nsratio
