#pragma once

// Independent reference for the 1D weighted eigenproblems with a smooth
// weight: Rayleigh-Ritz on shifted Legendre polynomials with Gauss-Legendre
// quadrature. Converges spectrally when the weight and eigenfunction are
// analytic, which is the case for polynomial weights.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

struct GaussRule {
    std::vector<double> x, w;  // on [0,1]
};

inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    for (int i = 1; i <= n; ++i) {
        double z = std::cos(std::numbers::pi * (i - 0.25) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.x.push_back(0.5 * (1.0 - z));
        r.w.push_back(1.0 / ((1.0 - z * z) * dp * dp));
    }
    return r;
}

// Values and derivatives of shifted Legendre polynomials P_k(2x-1), k <= deg.
inline void legendre(double x, int deg, std::vector<double>& p, std::vector<double>& dp) {
    const double z = 2.0 * x - 1.0;
    p.assign(deg + 1, 0.0);
    dp.assign(deg + 1, 0.0);
    p[0] = 1.0;
    if (deg >= 1) {
        p[1] = z;
        dp[1] = 2.0;
    }
    for (int k = 2; k <= deg; ++k) {
        p[k] = ((2.0 * k - 1.0) * z * p[k - 1] - (k - 1.0) * p[k - 2]) / k;
        dp[k] = dp[k - 2] + 2.0 * (2.0 * k - 1.0) * p[k - 1];
    }
}

// Smallest nonzero eigenvalue of -(h u')' = lambda w u with natural end conditions,
// where w = h (neumann) or w = 1 (steklov).
inline double ritz_eigenvalue(const std::function<double(double)>& h, bool neumann, int deg = 24) {
    const GaussRule g = gauss_legendre(2 * deg + 8);
    const int n = deg + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n), M = Eigen::MatrixXd::Zero(n, n);
    std::vector<double> p, dp;
    for (std::size_t q = 0; q < g.x.size(); ++q) {
        legendre(g.x[q], deg, p, dp);
        const double hx = h(g.x[q]);
        const double wx = neumann ? hx : 1.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                A(i, j) += g.w[q] * hx * dp[i] * dp[j];
                M(i, j) += g.w[q] * wx * p[i] * p[j];
            }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, M);
    return es.eigenvalues()[1];  // [0] is the constant mode
}

}  // namespace oracle
