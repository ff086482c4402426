#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "nsratio/bounds.hpp"
#include "nsratio/errors.hpp"

using namespace nsratio;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quartic: sign pattern at tau = 0.5") {
    const double tau = 0.5;
    CHECK(quartic(tau, 0.0) > 0.0);
    CHECK(quartic(tau, 2.0 * tau / 3.0) < 0.0);
    CHECK(quartic(tau, tau + 0.5 * tau * tau) > 0.0);
    CHECK(quartic(tau, 2.0 + std::sqrt(2.0)) < 0.0);
    CHECK(lemma_case_for(tau) == LemmaCase::I);
}

TEST_CASE("quartic: factored evaluation matches the expanded polynomial") {
    for (double tau : {0.1, 0.5, 0.95})
        for (double y : {0.0, 0.3, 1.0, 3.7, 20.0}) {
            const double expanded = 0.25 * tau * std::pow(y, 4) - 2.0 * std::pow(y, 3) + 5.0 * tau * y * y -
                                    4.0 * tau * tau * y + tau * tau * tau;
            CHECK(quartic(tau, y) == doctest::Approx(expanded).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("quartic roots at tau = 0.9 agree between the two bracket sets") {
    const auto a = quartic_roots(0.9, LemmaCase::II);
    const auto b = quartic_roots(0.9, LemmaCase::III);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a.roots[i] - b.roots[i]) < 1e-11);
    CHECK_THROWS_AS((void)quartic_roots(0.5, LemmaCase::III), InputError);
    CHECK_THROWS_AS((void)quartic_roots(0.0), InputError);
    CHECK_THROWS_AS((void)quartic_roots(1.0), InputError);
}

TEST_CASE("property: Vieta product, ordering, residual and bracket membership") {
    for (int k = 1; k < 200; ++k) {
        const double tau = k / 200.0;
        const auto q = quartic_roots(tau);
        INFO("tau = " << tau);
        const double prod = q.roots[0] * q.roots[1] * q.roots[2] * q.roots[3];
        CHECK(std::abs(prod / (4.0 * tau * tau) - 1.0) < 1e-9);
        for (int i = 0; i < 3; ++i) CHECK(q.roots[i] < q.roots[i + 1]);
        for (int i = 0; i < 4; ++i) {
            CHECK(q.roots[i] > q.brackets[i].first);
            CHECK(q.roots[i] < q.brackets[i].second);
        }
        CHECK(q.scaled_residual <= 1e-11);
        CHECK(q.roots[3] < quartic_root_bound(tau));
    }
}

TEST_CASE("lemma verification on a 1000-point grid") {
    const auto v = verify_lemma(1000);
    CHECK(v.samples == 1000);
    CHECK(v.sign_failures == 0);
    CHECK(v.membership_failures == 0);
    CHECK(v.nonnegativity_failures == 0);
    CHECK(v.max_scaled_residual <= 1e-11);
    CHECK(v.ok());
}

TEST_CASE("g at the endpoints and at one half") {
    CHECK(g_of_tau(0.0) == 0.5);
    CHECK(g_of_tau(1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    // 50-digit evaluation of 1 / (sqrt 3 + pi / 6)
    using big = boost::multiprecision::cpp_bin_float_50;
    const big ref = big(1) / (boost::multiprecision::sqrt(big(3)) + boost::math::constants::pi<big>() / 6);
    CHECK(std::abs(g_of_tau(0.5) - ref.convert_to<double>()) < 1e-15);
    CHECK(std::abs(g_of_tau(0.5) - 0.4433312724913113) < 1e-15);
    CHECK_THROWS_AS((void)g_of_tau(1.5), InputError);
}

TEST_CASE("f on a grid: finite, positive, below 3.52") {
    double fmax = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const double tau = kTauMin + (kTauMax - kTauMin) * k / 999.0;
        const double f = f_of_tau(tau);
        CHECK(std::isfinite(f));
        CHECK(f > 0.0);
        fmax = std::max(fmax, f);
    }
    CHECK(fmax <= 3.52);
}

TEST_CASE("f near zero tends to pi, decreasing on the first decade") {
    // y_2 ~ tau for small tau (the cubic part factors as -(y - tau)^2 (2y - tau)),
    // and g -> 1/2, so f -> 2 pi tau (1/2) / tau = pi.
    double prev = 0.0;
    for (double tau : {1e-4, 1e-3, 1e-2, 1e-1}) {
        const double f = f_of_tau(tau);
        CHECK(f > prev);
        CHECK(f > kPi);
        prev = f;
    }
    CHECK(std::abs(f_of_tau(1e-6) - kPi) < 1e-5);
}

TEST_CASE("constant K") {
    const auto k = constant_K(1000);
    CHECK(2.0 * (1.0 + k.K) <= 9.04);
    CHECK(k.K <= 3.52);
    CHECK(k.K >= f_of_tau(0.8));
    CHECK(k.K >= f_of_tau(k.tau_star) - 1e-15);
    const auto k2 = constant_K(2000);
    CHECK(std::abs(k2.K - k.K) < 1e-6);
    CHECK_THROWS_AS((void)constant_K(50), InputError);
}

TEST_CASE("lower constant and branch matching") {
    const auto lb = lower_bound_constant();
    CHECK(std::abs(lb.value - kPi * kPi / (6.0 * std::cbrt(18.0))) < 1e-12);
    CHECK(std::abs(lb.value - 0.6276) < 1e-4);
    CHECK(lb.branch_gap < 1e-12);
    CHECK(std::abs(kPi * kPi / (6.0 * lb.delta) - lb.delta * lb.delta * kPi * kPi / 108.0) < 1e-12);
    // 108 = 2 * 54: the 1/54 isoperimetric minimum enters as delta^2 pi^2 / (2 * 54)
    CHECK(108 == 2 * 54);
}

TEST_CASE("global chain of constants") {
    const double lower = lower_bound_constant().value;
    const double upper = 2.0 * (1.0 + constant_K(1000).K);
    CHECK(lower < 1.0);
    CHECK(1.0 < 4.0);
    CHECK(4.0 < upper);
    CHECK(upper <= 9.04);
}

TEST_CASE("per-domain upper bound") {
    // unit disk: w = D = 2, r = 1, P = 2 pi
    CHECK(per_domain_upper_bound(2.0, 2.0, 1.0, 2.0 * kPi) == doctest::Approx(6.0).epsilon(1e-15));
    // unit square
    CHECK(per_domain_upper_bound(1.0, std::sqrt(2.0), 0.5, 4.0) ==
          doctest::Approx(2.0 * (1.0 + kPi * std::sqrt(2.0) / 2.0)).epsilon(1e-15));
    CHECK_THROWS_AS((void)per_domain_upper_bound(1.0, 1.0, 0.0, 1.0), InputError);
}
