#include "nsratio/variations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "nsratio/errors.hpp"
#include "nsratio/parallel.hpp"

namespace nsratio {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

// int phi(x) cos(2 pi x) dx, exact per linear piece via the antiderivative
// (a + b x) sin(kx)/k + b cos(kx)/k^2.
double cos2pi_moment(const ProfileH& phi) {
    const double k = 2.0 * kPi;
    const auto& xs = phi.knots();
    const auto& ys = phi.values();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double p = xs[i], q = xs[i + 1];
        const double b = (ys[i + 1] - ys[i]) / (q - p);
        auto F = [&](double x, double fx) { return fx * std::sin(k * x) / k + b * std::cos(k * x) / (k * k); };
        s += F(q, ys[i + 1]) - F(p, ys[i]);
    }
    return s;
}

using Scalar = std::function<double(double)>;

// Central differences (first or second) at the given steps plus Richardson.
VariationReport difference_report(std::string name, double analytic, const Scalar& f, const std::vector<double>& steps,
                                  int order) {
    if (steps.size() < 3) throw InputError(name + ": at least 3 finite-difference steps are required");
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (!(steps[i] > 0.0) || (i > 0 && !(steps[i] < steps[i - 1])))
            throw InputError(name + ": steps must be positive and decreasing");
    VariationReport r;
    r.name = std::move(name);
    r.analytic = analytic;
    r.steps = steps;
    const double f0 = order == 2 ? f(0.0) : 0.0;
    for (double t : steps) {
        const double fp = f(t), fm = f(-t);
        r.by_step.push_back(order == 1 ? (fp - fm) / (2.0 * t) : (fp - 2.0 * f0 + fm) / (t * t));
    }
    // Both differences have even error expansions in t.
    std::vector<double> level = r.by_step;
    for (int k = 1; level.size() > 1; ++k) {
        std::vector<double> next;
        for (std::size_t i = 0; i + 1 < level.size(); ++i) {
            // assumes a geometric step sequence
            const double w = std::pow(steps[i] / steps[i + 1], 2.0 * k);
            next.push_back((w * level[i + 1] - level[i]) / (w - 1.0));
        }
        level = std::move(next);
    }
    r.finite_difference = level[0];
    r.relative_error = analytic != 0.0 ? std::abs(r.finite_difference - analytic) / std::abs(analytic)
                                       : std::abs(r.finite_difference - analytic);
    const double d1 = r.by_step[0] - r.by_step[1], d2 = r.by_step[1] - r.by_step[2];
    const double floor = 1e-11 * std::max(1.0, std::abs(r.by_step[2]));
    r.observed_order = (std::abs(d1) > floor && std::abs(d2) > floor && d1 / d2 > 0.0)
                           ? std::log(d1 / d2) / std::log(steps[0] / steps[1])
                           : std::numeric_limits<double>::quiet_NaN();
    return r;
}

void require_direction(const ProfileH& phi, const char* who) {
    if (!std::isfinite(phi.max_value()) || !std::isfinite(phi.min_value()))
        throw InputError(std::string(who) + ": direction must be bounded");
}

}  // namespace

double sigma_dot(const ProfileH& phi) { return kPi * kPi * (phi.integral() - cos2pi_moment(phi)); }
double mu_dot(const ProfileH& phi) { return -2.0 * kPi * kPi * cos2pi_moment(phi); }
double F_dot(const ProfileH& phi) { return mu_dot(phi) / (kPi * kPi) + phi.integral() - sigma_dot(phi) / (kPi * kPi); }

VariationReport first_variation_sigma(const ProfileH& phi, const VariationOptions& o) {
    require_direction(phi, "first_variation_sigma");
    return difference_report(
        "sigma_dot", sigma_dot(phi),
        [&](double t) { return sigma1(ProfileH::one_plus(t, phi), o.solver).eigenvalue; }, o.steps, 1);
}

VariationReport first_variation_mu(const ProfileH& phi, const VariationOptions& o) {
    require_direction(phi, "first_variation_mu");
    return difference_report(
        "mu_dot", mu_dot(phi), [&](double t) { return mu1(ProfileH::one_plus(t, phi), o.solver).eigenvalue; },
        o.steps, 1);
}

VariationReport first_variation_F(const ProfileH& phi, const VariationOptions& o) {
    require_direction(phi, "first_variation_F");
    return difference_report(
        "F_dot", F_dot(phi), [&](double t) { return F_of_h(ProfileH::one_plus(t, phi), o.solver).F; }, o.steps, 1);
}

SecondVariation second_variation_F_linear(double A, const VariationOptions& o) {
    if (!(A != 0.0) || !std::isfinite(A)) throw InputError("second_variation_F_linear: A must be nonzero");
    const ProfileH phi({0.0, 1.0}, {0.0, A});
    SecondVariation s;
    s.F = difference_report(
        "F_ddot", A * A * (9.0 + kPi * kPi) / (8.0 * kPi * kPi),
        [&](double t) { return F_of_h(ProfileH::one_plus(t, phi), o.solver).F; }, o.steps, 2);
    s.sigma = difference_report(
        "sigma_ddot", A * A * (3.0 - kPi * kPi) / 8.0,
        [&](double t) { return sigma1(ProfileH::one_plus(t, phi), o.solver).eigenvalue; }, o.steps, 2);
    s.mu = difference_report(
        "mu_ddot", 1.5 * A * A, [&](double t) { return mu1(ProfileH::one_plus(t, phi), o.solver).eigenvalue; },
        o.steps, 2);
    return s;
}

double steklov_vdot(double A, double x) {
    const double a = A / (4.0 * kSqrt2) - A / (2.0 * kSqrt2) * x;
    const double b = A / (2.0 * kSqrt2 * kPi) + A * kPi / (2.0 * kSqrt2) * (x * x - x);
    return a * std::cos(kPi * x) + b * std::sin(kPi * x);
}

double neumann_udot(double A, double x) { return A / kSqrt2 * (std::sin(kPi * x) / kPi - x * std::cos(kPi * x)); }

double EigenfunctionResiduals::max_residual() const {
    return std::max({v_ode, v_boundary, v_orthogonality, u_ode, u_boundary, u_normalization});
}

EigenfunctionResiduals eigenfunction_derivative_residuals(double A, std::size_t grid) {
    if (grid < 3) throw InputError("eigenfunction_derivative_residuals: grid too small");
    // Hand-differentiated forms of steklov_vdot and neumann_udot.
    auto v1 = [&](double x) {
        return kSqrt2 * A / 8.0 *
               (3.0 * kPi * (2.0 * x - 1.0) * std::sin(kPi * x) + 2.0 * kPi * kPi * x * (x - 1.0) * std::cos(kPi * x));
    };
    auto v2 = [&](double x) {
        return kSqrt2 * kPi * A / 8.0 *
               (5.0 * kPi * (2.0 * x - 1.0) * std::cos(kPi * x) + (6.0 - 2.0 * kPi * kPi * x * (x - 1.0)) * std::sin(kPi * x));
    };
    auto u1 = [&](double x) { return A / kSqrt2 * kPi * x * std::sin(kPi * x); };
    auto u2 = [&](double x) { return A / kSqrt2 * kPi * (std::sin(kPi * x) + kPi * x * std::cos(kPi * x)); };

    EigenfunctionResiduals r;
    r.A = A;
    for (std::size_t i = 0; i < grid; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(grid - 1);
        const double rhs = (A * kPi * kPi / kSqrt2 - A * x * kSqrt2 * kPi * kPi) * std::cos(kPi * x) -
                           A * kSqrt2 * kPi * std::sin(kPi * x);
        r.v_ode = std::max(r.v_ode, std::abs(-v2(x) - kPi * kPi * steklov_vdot(A, x) - rhs));
        r.u_ode = std::max(r.u_ode,
                           std::abs(-u2(x) - kPi * kPi * neumann_udot(A, x) + A * kSqrt2 * kPi * std::sin(kPi * x)));
    }
    r.v_boundary = std::max(std::abs(v1(0.0)), std::abs(v1(1.0)));
    r.u_boundary = std::max(std::abs(u1(0.0)), std::abs(u1(1.0)));

    // Composite 8-point Gauss-Legendre on 64 panels; the integrands are entire.
    static constexpr double gx[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
    static constexpr double gw[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    auto integrate = [&](auto&& f) {
        const int panels = 64;
        double s = 0.0;
        for (int p = 0; p < panels; ++p) {
            const double a = static_cast<double>(p) / panels, half = 0.5 / panels, mid = a + half;
            for (int k = 0; k < 4; ++k) s += half * gw[k] * (f(mid - half * gx[k]) + f(mid + half * gx[k]));
        }
        return s;
    };
    const double vv0 = integrate([&](double x) { return steklov_vdot(A, x) * kSqrt2 * std::cos(kPi * x); });
    r.u_inner_product = integrate([&](double x) { return neumann_udot(A, x) * kSqrt2 * std::cos(kPi * x); });
    r.v_orthogonality = std::abs(vv0);
    r.u_normalization = std::abs(r.u_inner_product + A / 4.0);
    r.u_stated_side_value = -2.0 * A / (kPi * kPi);
    return r;
}

ProfileH random_concave_direction(std::uint64_t seed, std::size_t knots) {
    if (knots < 3) throw InputError("random_concave_direction: at least 3 knots");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double x0 = 0.15 + 0.7 * U(rng), peak = 0.5 + U(rng);
    struct Line {
        double y0, y1;
    };
    std::vector<Line> lines(1 + rng() % 3);
    for (auto& l : lines) l = {0.2 + U(rng), 0.2 + U(rng)};
    std::vector<double> xs(knots), ys(knots);
    for (std::size_t i = 0; i < knots; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(knots - 1);
        double y = peak * (x <= x0 ? x / x0 : (1.0 - x) / (1.0 - x0)) + 0.1;
        for (const auto& l : lines) y = std::min(y, l.y0 + (l.y1 - l.y0) * x);
        xs[i] = x;
        ys[i] = y;
    }
    const double m = *std::max_element(ys.begin(), ys.end());
    for (double& y : ys) y /= m;
    return ProfileH(std::move(xs), std::move(ys));
}

namespace {

OptimizeRun pattern_search(std::vector<double> start, const OptimizeOptions& o) {
    const std::size_t n = o.knots;
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    const double sign = o.mode == OptimizeMode::Min ? 1.0 : -1.0;
    Sl1dOptions so;
    so.elements = o.elements;

    OptimizeRun run;
    auto evaluate = [&](const std::vector<double>& y, ProfileH& out) {
        ++run.evaluations;
        try {
            out = normalize(project_concave(xs, y));
            return F_of_h(out, so).F;
        } catch (const InputError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
    ProfileH cur = constant_profile();
    double fcur = evaluate(start, cur);
    if (!std::isfinite(fcur)) throw ComputationError("optimize_F: starting profile could not be evaluated");
    std::vector<double> y = cur.values();
    run.trace.push_back(fcur);
    double step = o.initial_step;
    while (step >= o.min_step && run.evaluations < o.max_evaluations) {
        bool improved = false;
        for (std::size_t i = 0; i < n && run.evaluations < o.max_evaluations; ++i)
            for (double d : {step, -step}) {
                std::vector<double> trial = y;
                trial[i] += d;
                ProfileH p = cur;
                const double f = evaluate(trial, p);
                if (std::isfinite(f) && sign * (f - fcur) < -1e-13) {
                    fcur = f;
                    cur = p;
                    y = cur.values();
                    run.trace.push_back(fcur);
                    improved = true;
                    break;
                }
            }
        if (!improved) step *= 0.5;
    }
    run.best = fcur;
    run.profile = cur;
    return run;
}

}  // namespace

OptimizeResult optimize_F(const OptimizeOptions& o) {
    if (o.knots < 5) throw InputError("optimize_F: at least 5 knots");
    if (o.restarts < 1) throw InputError("optimize_F: at least one restart");
    if (!(o.initial_step > 0.0) || !(o.min_step > 0.0)) throw InputError("optimize_F: steps must be positive");
    OptimizeResult res;
    res.runs.resize(o.restarts);
    parallel_for(
        o.restarts,
        [&](std::size_t r) {
            std::vector<double> start(o.knots, 1.0);
            if (r > 0) {
                const ProfileH d = random_concave_direction(o.seed * 0x9E3779B97F4A7C15ULL + r, o.knots);
                start = d.values();
            }
            res.runs[r] = pattern_search(std::move(start), o);
        },
        o.threads);
    res.best = res.runs[0];
    for (const auto& r : res.runs)
        if ((o.mode == OptimizeMode::Min && r.best < res.best.best) || (o.mode == OptimizeMode::Max && r.best > res.best.best))
            res.best = r;
    return res;
}

}  // namespace nsratio
