#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsratio/profile.hpp"
#include "nsratio/sl1d.hpp"

namespace nsratio {

/// Finite-difference check of a derivative of an eigenvalue functional along
/// h = 1 + t phi at t = 0.
struct VariationReport {
    std::string name;
    double analytic = 0.0;
    double finite_difference = 0.0;   ///< Richardson combination over all steps
    std::vector<double> steps;        ///< t values, each half the previous
    std::vector<double> by_step;      ///< plain central difference per step
    double relative_error = 0.0;      ///< |fd - analytic| / |analytic| (absolute when analytic == 0)
    double observed_order = 0.0;      ///< from the three plain differences; NaN at roundoff level
};

struct VariationOptions {
    std::vector<double> steps = {1e-3, 5e-4, 2.5e-4};
    Sl1dOptions solver{};
};

/// Closed forms, integrated exactly per linear piece of phi.
[[nodiscard]] double sigma_dot(const ProfileH& phi);  ///< 2 pi^2 int phi sin^2(pi x)
[[nodiscard]] double mu_dot(const ProfileH& phi);     ///< 2 pi^2 int phi (sin^2 - cos^2)(pi x)
[[nodiscard]] double F_dot(const ProfileH& phi);      ///< mu_dot/pi^2 + int phi - sigma_dot/pi^2

[[nodiscard]] VariationReport first_variation_sigma(const ProfileH& phi, const VariationOptions& o = {});
[[nodiscard]] VariationReport first_variation_mu(const ProfileH& phi, const VariationOptions& o = {});
/// Central differences of F(1 + t phi) without renormalization (F is scale invariant).
[[nodiscard]] VariationReport first_variation_F(const ProfileH& phi, const VariationOptions& o = {});

struct SecondVariation {
    VariationReport F;
    VariationReport sigma;  ///< against A^2 (3 - pi^2) / 8
    VariationReport mu;     ///< against 3 A^2 / 2
};

/// Second central differences along phi = A x; analytic F'' = A^2 (9 + pi^2) / (8 pi^2).
[[nodiscard]] SecondVariation second_variation_F_linear(double A, const VariationOptions& o = {});

/// Derivatives of the normalized eigenfunctions along A x at h = 1.
[[nodiscard]] double steklov_vdot(double A, double x);
[[nodiscard]] double neumann_udot(double A, double x);

struct EigenfunctionResiduals {
    double A = 1.0;
    double v_ode = 0.0;           ///< sup |-v'' - pi^2 v - rhs| on the grid
    double v_boundary = 0.0;      ///< max(|v'(0)|, |v'(1)|)
    double v_orthogonality = 0.0; ///< |int v v0|
    double u_ode = 0.0;           ///< sup |-u'' - pi^2 u + A sqrt2 pi sin(pi x)|
    double u_boundary = 0.0;
    double u_normalization = 0.0; ///< |int u u0 + A/4|, from differentiating int h u^2 = 1
    double u_stated_side_value = 0.0;  ///< A int x cos(pi x) = -2A/pi^2
    double u_inner_product = 0.0;      ///< int u u0 of the closed form
    [[nodiscard]] double max_residual() const;
};

[[nodiscard]] EigenfunctionResiduals eigenfunction_derivative_residuals(double A = 1.0, std::size_t grid = 10001);

/// Concave direction on `knots` uniform knots: minimum of a few random affine
/// functions plus a tent, deterministic in the seed. Values lie in [0, 1] with
/// maximum 1.
[[nodiscard]] ProfileH random_concave_direction(std::uint64_t seed, std::size_t knots = 257);

enum class OptimizeMode { Min, Max };

struct OptimizeOptions {
    std::size_t knots = 21;
    OptimizeMode mode = OptimizeMode::Min;
    std::size_t restarts = 1;
    std::uint64_t seed = 0;
    std::size_t elements = 1024;
    double initial_step = 0.25;
    double min_step = 1e-4;
    std::size_t max_evaluations = 4000;  ///< per restart
    unsigned threads = 0;
};

struct OptimizeRun {
    double best = 0.0;
    ProfileH profile = constant_profile();
    std::vector<double> trace;  ///< best value after each accepted move, starting value first
    std::size_t evaluations = 0;
};

struct OptimizeResult {
    OptimizeRun best;
    std::vector<OptimizeRun> runs;  ///< restart 0 starts from h = 1, the rest from random concave profiles
};

/// Coordinate pattern search on the knot ordinates; every iterate goes through
/// project_concave and normalize before F is evaluated.
[[nodiscard]] OptimizeResult optimize_F(const OptimizeOptions& options = {});

}  // namespace nsratio
