#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nsratio/errors.hpp"
#include "nsratio/variations.hpp"

using namespace nsratio;

namespace {
constexpr double kPi = std::numbers::pi;

ProfileH cos2pi(std::size_t n = 2049) {
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i) / static_cast<double>(n - 1);
        y[i] = std::cos(2.0 * kPi * x[i]);
    }
    return {x, y};
}

// Independent quadrature of int phi g over [0,1] (composite Simpson on 20000 cells).
template <class G>
double simpson(const ProfileH& phi, G g) {
    const int n = 20000;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double x = static_cast<double>(i) / n, w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * phi(x) * g(x);
    }
    return s / (3.0 * n);
}
}  // namespace

TEST_CASE("closed forms on simple directions") {
    const ProfileH one = constant_profile(1.0), x({0.0, 1.0}, {0.0, 1.0});
    CHECK(sigma_dot(one) == doctest::Approx(kPi * kPi).epsilon(1e-14));
    CHECK(std::abs(mu_dot(one)) < 1e-13);
    CHECK(sigma_dot(x) == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-14));
    CHECK(std::abs(mu_dot(x)) < 1e-13);
    CHECK(std::abs(F_dot(x)) < 1e-14);
    const auto c = cos2pi();
    CHECK(sigma_dot(c) == doctest::Approx(-kPi * kPi / 2.0).epsilon(1e-6));
    CHECK(mu_dot(c) == doctest::Approx(-kPi * kPi).epsilon(1e-6));
    CHECK(F_dot(c) == doctest::Approx(-0.5).epsilon(1e-6));
}

TEST_CASE("closed forms agree with independent quadrature") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto phi = random_concave_direction(s);
        const double ssq = simpson(phi, [](double t) { return std::pow(std::sin(kPi * t), 2); });
        const double c2 = simpson(phi, [](double t) { return std::cos(2 * kPi * t); });
        CHECK(sigma_dot(phi) == doctest::Approx(2 * kPi * kPi * ssq).epsilon(1e-8));
        CHECK(mu_dot(phi) == doctest::Approx(-2 * kPi * kPi * c2).epsilon(1e-7));
        CHECK(F_dot(phi) == doctest::Approx(-c2).epsilon(1e-7));
        // nonpositive first cosine coefficient for concave directions
        CHECK(F_dot(phi) > 0.0);
        CHECK(validate(phi).valid);
    }
}

TEST_CASE("first variations: finite differences match") {
    const auto c = cos2pi();
    for (const auto& r : {first_variation_sigma(c), first_variation_mu(c), first_variation_F(c)}) {
        CHECK_MESSAGE(r.relative_error < 1e-4, r.name);
        CHECK(r.observed_order >= 1.8);
        CHECK(r.by_step.size() == 3);
    }
    const auto phi = random_concave_direction(42);
    CHECK(first_variation_sigma(phi).relative_error < 1e-4);
    CHECK(first_variation_mu(phi).relative_error < 1e-4);
    CHECK(first_variation_F(phi).relative_error < 1e-4);
    const ProfileH affine({0.0, 1.0}, {0.3, 1.9});
    CHECK(std::abs(first_variation_F(affine).finite_difference) < 1e-6);
}

TEST_CASE("second variation along A x") {
    const auto s1 = second_variation_F_linear(1.0);
    CHECK(s1.F.analytic == doctest::Approx(0.2389863316).epsilon(1e-9));
    CHECK(s1.F.relative_error < 1e-3);
    CHECK(s1.sigma.analytic == doctest::Approx(-0.85870).epsilon(1e-4));
    CHECK(s1.sigma.relative_error < 1e-3);
    CHECK(s1.mu.relative_error < 1e-3);
    const auto s2 = second_variation_F_linear(2.0);
    CHECK(s2.F.analytic == doctest::Approx(4.0 * s1.F.analytic).epsilon(1e-14));
    CHECK(s2.F.relative_error < 1e-3);
    CHECK_THROWS_AS((void)second_variation_F_linear(0.0), InputError);
}

TEST_CASE("eigenfunction derivative closed forms") {
    for (double A : {1.0, -0.5, 3.0}) {
        const auto r = eigenfunction_derivative_residuals(A);
        CHECK(r.max_residual() <= 1e-10 * std::max(1.0, std::abs(A)));
        CHECK(r.u_stated_side_value == doctest::Approx(-2.0 * A / (kPi * kPi)));
    }
    // second derivatives by finite differences as an independent check of the ODE
    const double h = 1e-4;
    for (double x : {0.1, 0.37, 0.8}) {
        const double v2 = (steklov_vdot(1, x + h) - 2 * steklov_vdot(1, x) + steklov_vdot(1, x - h)) / (h * h);
        const double rhs = (kPi * kPi / std::sqrt(2.0) - x * std::sqrt(2.0) * kPi * kPi) * std::cos(kPi * x) -
                           std::sqrt(2.0) * kPi * std::sin(kPi * x);
        CHECK(std::abs(-v2 - kPi * kPi * steklov_vdot(1, x) - rhs) < 1e-5);
    }
}

TEST_CASE("optimizer: h = 1 is a local minimum, traces are monotone") {
    OptimizeOptions o;
    o.knots = 11;
    o.min_step = 1e-3;
    const auto r = optimize_F(o);
    CHECK(r.best.best >= 1.0 - 1e-6);
    CHECK(r.best.best <= 1.0 + 1e-9);

    o.restarts = 4;
    o.seed = 5;
    o.max_evaluations = 300;
    for (OptimizeMode mode : {OptimizeMode::Min, OptimizeMode::Max}) {
        o.mode = mode;
        const auto res = optimize_F(o);
        for (const auto& run : res.runs) {
            for (std::size_t i = 1; i < run.trace.size(); ++i)
                CHECK((mode == OptimizeMode::Min ? run.trace[i] <= run.trace[i - 1] : run.trace[i] >= run.trace[i - 1]));
            CHECK(validate(run.profile).valid);
            CHECK(run.best >= kPi * kPi / 12.0 - 1e-3);
            CHECK(run.best <= 4.0 + 1e-3);
        }
    }
    o.knots = 3;
    CHECK_THROWS_AS((void)optimize_F(o), InputError);
}
