#include "nsratio/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "nsratio/errors.hpp"
#include "nsratio/parallel.hpp"

namespace nsratio {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// Sum of the absolute monomials: |P(y)| divided by this is the relative backward
// error of y with respect to the coefficients.
double quartic_term_sum(double tau, double y) {
    return 0.25 * tau * std::pow(y, 4) + 2.0 * std::pow(y, 3) + 5.0 * tau * y * y + 4.0 * tau * tau * y +
           tau * tau * tau;
}

double split_low(LemmaCase c, double tau) {
    switch (c) {
        case LemmaCase::I: return 2.0 * tau / 3.0;
        case LemmaCase::II: return 0.5;
        case LemmaCase::III: return 2.0 - kSqrt2;
    }
    return 0.0;
}

// Bisects until the midpoint is no longer representable between the endpoints.
double bisect_root(double tau, double a, double b) {
    double fa = quartic(tau, a);
    for (int it = 0; it < 2000; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = quartic(tau, m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return std::abs(quartic(tau, a)) <= std::abs(quartic(tau, b)) ? a : b;
}

const char* case_name(LemmaCase c) {
    switch (c) {
        case LemmaCase::I: return "I";
        case LemmaCase::II: return "II";
        case LemmaCase::III: return "III";
    }
    return "?";
}

}  // namespace

double quartic(double tau, double y) {
    // Factored cubic part: -2y^3 + 5 tau y^2 - 4 tau^2 y + tau^3 = -(y - tau)^2 (2y - tau).
    // The expanded form loses every digit near y ~ tau when tau is small.
    const double d = y - tau;
    return 0.25 * tau * y * y * y * y - d * d * (2.0 * y - tau);
}

LemmaCase lemma_case_for(double tau) {
    if (tau <= std::sqrt(3.0) / 2.0) return LemmaCase::I;
    if (tau <= 0.9) return LemmaCase::II;
    return LemmaCase::III;
}

bool lemma_case_applies(LemmaCase c, double tau) {
    if (!(tau > 0.0 && tau < 1.0)) return false;
    switch (c) {
        case LemmaCase::I: return tau <= std::sqrt(3.0) / 2.0;
        case LemmaCase::II: return tau >= std::sqrt(3.0) / 2.0 && tau <= 0.9;
        case LemmaCase::III: return tau >= 0.9;
    }
    return false;
}

double quartic_root_bound(double tau) { return 1.0 + std::max(8.0 / tau, 20.0); }

QuarticRoots quartic_roots(double tau) {
    if (!(tau > 0.0 && tau < 1.0)) throw InputError("quartic_roots: tau must lie in (0,1)");
    return quartic_roots(tau, lemma_case_for(tau));
}

QuarticRoots quartic_roots(double tau, LemmaCase c) {
    if (!(tau > 0.0 && tau < 1.0)) throw InputError("quartic_roots: tau must lie in (0,1)");
    if (!lemma_case_applies(c, tau))
        throw InputError(std::string("quartic_roots: case ") + case_name(c) + " does not cover tau = " +
                         std::to_string(tau));
    const double pts[5] = {0.0, split_low(c, tau), tau + 0.5 * tau * tau, 2.0 + kSqrt2, quartic_root_bound(tau)};
    QuarticRoots out;
    out.tau = tau;
    out.lemma_case = c;
    for (int i = 0; i < 4; ++i) {
        const double a = pts[i], b = pts[i + 1];
        const double fa = quartic(tau, a), fb = quartic(tau, b);
        if (!(a < b) || (fa < 0.0) == (fb < 0.0))
            throw ComputationError("quartic_roots: invariant violation, no sign change on bracket " +
                                   std::to_string(i + 1) + " of case " + case_name(c) + " at tau = " +
                                   std::to_string(tau));
        out.brackets[static_cast<std::size_t>(i)] = {a, b};
        const double y = bisect_root(tau, a, b);
        out.roots[static_cast<std::size_t>(i)] = y;
        out.scaled_residual = std::max(out.scaled_residual, std::abs(quartic(tau, y)) / quartic_term_sum(tau, y));
    }
    return out;
}

double g_of_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw InputError("g_of_tau: tau must lie in [0,1]");
    return 1.0 / (2.0 * std::sqrt(1.0 - tau * tau) + 2.0 * tau * std::asin(tau));
}

double f_of_tau(double tau) {
    const QuarticRoots q = quartic_roots(tau);
    return 2.0 * kPi * tau * g_of_tau(tau) / q.roots[1];
}

KResult constant_K(std::size_t grid, double tolerance, unsigned threads) {
    if (grid < 100) throw InputError("constant_K: grid must have at least 100 points");
    std::vector<double> tau(grid), f(grid);
    for (std::size_t i = 0; i < grid; ++i)
        tau[i] = kTauMin + (kTauMax - kTauMin) * static_cast<double>(i) / static_cast<double>(grid - 1);
    parallel_for(grid, [&](std::size_t i) { f[i] = f_of_tau(tau[i]); }, threads);
    const auto imax = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());

    double a = tau[imax > 0 ? imax - 1 : 0];
    double b = tau[std::min(imax + 1, grid - 1)];
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f_of_tau(c), fd = f_of_tau(d);
    while (b - a > tolerance) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f_of_tau(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f_of_tau(d);
        }
    }
    KResult r;
    r.grid = grid;
    const double mid = 0.5 * (a + b);
    const double fmid = f_of_tau(mid);
    if (fmid >= f[imax]) {
        r.K = fmid;
        r.tau_star = mid;
    } else {
        r.K = f[imax];
        r.tau_star = tau[imax];
    }
    return r;
}

LowerBound lower_bound_constant() {
    LowerBound lb;
    lb.delta = std::cbrt(18.0);
    lb.value = kPi * kPi / (6.0 * lb.delta);
    lb.branch_gap = std::abs(kPi * kPi / (6.0 * lb.delta) - lb.delta * lb.delta * kPi * kPi / 108.0);
    return lb;
}

double per_domain_upper_bound(double width, double diameter, double inradius, double perimeter) {
    for (double v : {width, diameter, inradius, perimeter})
        if (!(v > 0.0) || !std::isfinite(v))
            throw InputError("per_domain_upper_bound: degenerate geometry (all functionals must be positive)");
    return 2.0 * (1.0 + kPi * width * diameter / (inradius * perimeter));
}

LemmaCheck verify_lemma(std::size_t grid, unsigned threads) {
    if (grid < 1) throw InputError("verify_lemma: empty grid");
    struct Local {
        bool sign = true, member = true, nonneg = true;
        double residual = 0.0;
    };
    std::vector<Local> res(grid);
    parallel_for(
        grid,
        [&](std::size_t k) {
            const double tau = (static_cast<double>(k) + 0.5) / static_cast<double>(grid);
            Local& L = res[k];
            const LemmaCase c = lemma_case_for(tau);
            const double a = split_low(c, tau), b = tau + 0.5 * tau * tau, cc = 2.0 + kSqrt2;
            L.sign = quartic(tau, 0.0) > 0.0 && quartic(tau, a) < 0.0 && quartic(tau, b) > 0.0 &&
                     quartic(tau, cc) < 0.0 && a < b;
            QuarticRoots q;
            try {
                q = quartic_roots(tau, c);
            } catch (const ComputationError&) {
                L.sign = false;
                return;
            }
            L.residual = q.scaled_residual;
            const double y2 = q.roots[1];
            if (c == LemmaCase::I) L.member = y2 > 2.0 * tau / 3.0 && y2 < b;
            if (c == LemmaCase::II) L.member = y2 > 0.5;
            if (c == LemmaCase::III) L.member = y2 > 2.0 - kSqrt2;
            const auto& y = q.roots;
            const std::pair<double, double> spans[3] = {{0.0, y[0]}, {y[1], y[2]}, {y[3], 2.0 * y[3]}};
            for (const auto& [lo, hi] : spans)
                for (int i = 0; i < 100; ++i) {
                    const double t = lo + (hi - lo) * (i + 0.5) / 100.0;
                    if (quartic(tau, t) < -1e-12 * quartic_term_sum(tau, t)) L.nonneg = false;
                }
        },
        threads);
    LemmaCheck out;
    out.samples = grid;
    for (const Local& L : res) {
        out.sign_failures += L.sign ? 0 : 1;
        out.membership_failures += L.member ? 0 : 1;
        out.nonnegativity_failures += L.nonneg ? 0 : 1;
        out.max_scaled_residual = std::max(out.max_scaled_residual, L.residual);
    }
    return out;
}

}  // namespace nsratio
