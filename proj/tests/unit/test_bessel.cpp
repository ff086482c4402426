#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/bessel_prime.hpp>

#include "nsratio/bessel.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/profile.hpp"
#include "nsratio/sl1d.hpp"

using namespace nsratio;

TEST_CASE("values at the origin") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK(bessel_j1_prime(0.0) == 0.5);
    CHECK(bessel_j0_prime(0.0) == 0.0);
}

TEST_CASE("agreement with boost up to 50") {
    for (double x = 0.0; x <= 50.0; x += 0.0173) {
        const double r0 = boost::math::cyl_bessel_j(0, x);
        const double r1 = boost::math::cyl_bessel_j(1, x);
        INFO("x = " << x);
        // absolute 1e-14: relative accuracy is meaningless at the zeros
        CHECK(std::abs(bessel_j0(x) - r0) <= 1e-14 * std::max(1.0, std::abs(r0)));
        CHECK(std::abs(bessel_j1(x) - r1) <= 1e-14 * std::max(1.0, std::abs(r1)));
        CHECK(bessel_j0_prime(x) == -bessel_j1(x));
        if (x > 0.0)
            CHECK(std::abs(bessel_j1_prime(x) - boost::math::cyl_bessel_j_prime(1, x)) <= 2e-14);
    }
}

TEST_CASE("series and recurrence agree on the overlap band around the switch point") {
    for (double x = 8.0; x <= 16.0; x += 0.01)
        for (int order : {0, 1}) {
            INFO("x = " << x << " order " << order);
            CHECK(std::abs(detail::bessel_series(order, x) - detail::bessel_recurrence(order, x)) <= 1e-13);
        }
}

TEST_CASE("first zeros") {
    const double j01 = first_zero_j0();
    const double j11p = first_zero_j1_prime();
    CHECK(std::abs(j01 - 2.404825557695773) < 1e-12);
    CHECK(std::abs(j11p - 1.8411837813406593) < 1e-12);
    // cross-check against the series directly
    CHECK(std::abs(detail::bessel_series(0, j01)) < 1e-15);
    CHECK(std::abs(j01 - boost::math::cyl_bessel_j_zero(0.0, 1)) < 1e-12);
}

TEST_CASE("tent at one half") {
    const double j01 = boost::math::cyl_bessel_j_zero(0.0, 1);
    const auto s = sigma1_tent(0.5);
    const auto m = mu1_tent(0.5);
    CHECK(std::abs(s.value - j01 * j01) < 1e-8);
    CHECK(std::abs(m.value - 4.0 * j01 * j01) < 1e-8);
    CHECK(s.equation == TentEquation::SteklovTent);
    CHECK(m.equation == TentEquation::NeumannTent);
}

TEST_CASE("roots: residual, bracket and ratio four") {
    for (int k = 1; k <= 9; ++k) {
        const double x0 = 0.1 * k;
        const auto s = sigma1_tent(x0);
        const auto m = mu1_tent(x0);
        INFO("x0 = " << x0);
        CHECK(s.residual <= 1e-12);
        CHECK(m.residual <= 1e-12);
        CHECK(s.bracket.first <= s.value);
        CHECK(s.value <= s.bracket.second);
        CHECK(steklov_tent_equation(s.bracket.first, x0) * steklov_tent_equation(s.bracket.second, x0) <= 0.0);
        CHECK(neumann_tent_equation(m.bracket.first, x0) * neumann_tent_equation(m.bracket.second, x0) <= 0.0);
        CHECK(std::abs(m.value / s.value - 4.0) < 1e-10);
        // first root: no sign change on a finer scan below the bracket
        double prev = steklov_tent_equation(1e-6, x0);
        for (double sg = 0.01; sg < s.bracket.first; sg += 0.01) {
            const double cur = steklov_tent_equation(sg, x0);
            CHECK(prev * cur > 0.0);
            prev = cur;
        }
    }
}

TEST_CASE("symmetry in x0") {
    for (double x0 : {0.1, 0.2, 0.35, 0.45}) {
        CHECK(std::abs(sigma1_tent(x0).value - sigma1_tent(1.0 - x0).value) <= 1e-12 * sigma1_tent(x0).value);
        CHECK(std::abs(mu1_tent(x0).value - mu1_tent(1.0 - x0).value) <= 1e-12 * mu1_tent(x0).value);
    }
}

TEST_CASE("agreement with the Galerkin solver") {
    for (double x0 : {0.1, 0.3, 0.5, 0.7}) {
        const auto t = triangular(x0);
        CHECK(std::abs(sigma1_tent(x0).value - sigma1(t).eigenvalue) < 1e-4);
        CHECK(std::abs(mu1_tent(x0).value - mu1(t).eigenvalue) < 1e-4);
    }
}

TEST_CASE("bad peak position") {
    CHECK_THROWS_AS((void)sigma1_tent(0.0), InputError);
    CHECK_THROWS_AS((void)mu1_tent(1.2), InputError);
}
