#pragma once

#include <cstddef>
#include <vector>

#include "nsratio/profile.hpp"

namespace nsratio {

/// The two weighted one-dimensional eigenproblems on (0,1), both with the
/// natural condition h u' = 0 at the ends:
///   NeumannWeighted:  -(h u')' = mu h u
///   SteklovWeighted:  -(h v')' = sigma v
enum class Sl1dKind { NeumannWeighted, SteklovWeighted };

struct Sl1dOptions {
    std::size_t elements = 2048;  ///< uniform P1 cells on [0,1], at least 8
    /// Combine the solves on `elements` and `elements/2` cells as (4 l_h - l_2h)/3.
    bool richardson = true;
    double tolerance = 1e-13;  ///< relative change of successive eigenvalue estimates
    double residual_tolerance = 1e-11;  ///< target for ||A x - l M x|| / ||A x||
    int max_iterations = 5000;
};

struct SpectralResult {
    double eigenvalue = 0.0;            ///< reported value (extrapolated when requested)
    double galerkin_eigenvalue = 0.0;   ///< plain Galerkin value on the finest mesh
    std::vector<double> eigenvector;    ///< nodal values on the finest mesh, unit mass norm
    double residual = 0.0;              ///< ||A x - l M x|| / ||A x||
    std::size_t dofs = 0;
    int iterations = 0;
};

struct Sl1dProblem {
    ProfileH profile;
    Sl1dKind kind = Sl1dKind::NeumannWeighted;
    std::size_t elements = 2048;
};

/// Galerkin solve with continuous P1 elements, constant mode deflated in the
/// relevant mass inner product, shift-invert (shift 0) iteration.
/// Throws ComputationError for a singular pencil or non-convergence.
[[nodiscard]] SpectralResult solve(const Sl1dProblem& problem, const Sl1dOptions& options = {});

[[nodiscard]] SpectralResult mu1(const ProfileH& h, const Sl1dOptions& options = {});
[[nodiscard]] SpectralResult sigma1(const ProfileH& h, const Sl1dOptions& options = {});

struct KernelOracleResult {
    double eigenvalue = 0.0;  ///< sigma_1 estimate, 1 / largest eigenvalue of the kernel operator
    std::size_t nodes = 0;
    int iterations = 0;
};

/// Independent route to sigma_1: the Green kernel
///   g(x,y) = int_0^min t/h(t) dt + int_max^1 (1-t)/h(t) dt
/// discretized by the midpoint rule on `nodes` cells, restricted to
/// mean-zero functions. The inner integrals are exact per linear piece.
/// Throws ComputationError when the kernel diverges (h vanishing on a piece
/// where the numerator does not).
[[nodiscard]] KernelOracleResult sigma1_kernel_oracle(const ProfileH& h, std::size_t nodes = 4096);

struct FResult {
    double F = 0.0;
    double mu1 = 0.0;
    double sigma1 = 0.0;
    double integral = 0.0;
    double mu1_residual = 0.0;
    double sigma1_residual = 0.0;
};

/// F(h) = mu_1(h) * int h / sigma_1(h) with matched discretizations.
[[nodiscard]] FResult F_of_h(const ProfileH& h, const Sl1dOptions& options = {});

namespace detail {
/// Integral of (alpha + beta t) / h(t) over [p,q] where h is linear with end
/// values hp, hq. Exposed for tests.
[[nodiscard]] double linear_ratio_integral(double alpha, double beta, double p, double q, double hp, double hq);
}  // namespace detail

}  // namespace nsratio
