#pragma once

#include <array>
#include <cstddef>
#include <utility>

namespace nsratio {

/// P_tau(y) = tau y^4 / 4 - 2 y^3 + 5 tau y^2 - 4 tau^2 y + tau^3
[[nodiscard]] double quartic(double tau, double y);

/// Which set of certified brackets is used for the roots.
///   I:   0 < tau <= sqrt(3)/2, split points 2tau/3, tau + tau^2/2, 2 + sqrt 2
///   II:  sqrt(3)/2 <= tau <= 0.9, split points 1/2, tau + tau^2/2, 2 + sqrt 2
///   III: 0.9 <= tau < 1, split points 2 - sqrt 2, tau + tau^2/2, 2 + sqrt 2
enum class LemmaCase { I, II, III };

[[nodiscard]] LemmaCase lemma_case_for(double tau);
[[nodiscard]] bool lemma_case_applies(LemmaCase c, double tau);

struct QuarticRoots {
    double tau = 0.0;
    LemmaCase lemma_case = LemmaCase::I;
    std::array<double, 4> roots{};
    std::array<std::pair<double, double>, 4> brackets{};
    /// max_i |P(y_i)| / (sum of the absolute monomials of P at y_i)
    double scaled_residual = 0.0;
};

/// Upper bound on all roots: 1 + max(8/tau, 20) (Cauchy bound on the monic form).
[[nodiscard]] double quartic_root_bound(double tau);

/// Four positive roots by bisection inside the certified brackets of the case
/// for tau. Throws InputError for tau outside (0,1) and ComputationError when a
/// bracket shows no sign change.
[[nodiscard]] QuarticRoots quartic_roots(double tau);
/// Same with an explicit bracket set; InputError if the case does not cover tau.
[[nodiscard]] QuarticRoots quartic_roots(double tau, LemmaCase c);

/// g(tau) = 1 / (2 sqrt(1 - tau^2) + 2 tau asin(tau)), tau in [0,1].
[[nodiscard]] double g_of_tau(double tau);
/// f(tau) = 2 pi tau g(tau) / y_2(tau), tau in (0,1).
[[nodiscard]] double f_of_tau(double tau);

inline constexpr double kTauMin = 1e-6;
inline constexpr double kTauMax = 1.0 - 1e-9;

struct KResult {
    double K = 0.0;
    double tau_star = 0.0;
    std::size_t grid = 0;
};

/// max of f over [kTauMin, kTauMax]: uniform grid, then golden-section search
/// on the two cells around the grid argmax. InputError if grid < 100.
[[nodiscard]] KResult constant_K(std::size_t grid = 1000, double tolerance = 1e-12, unsigned threads = 0);

struct LowerBound {
    double value = 0.0;       ///< pi^2 / (6 cbrt 18)
    double delta = 0.0;       ///< cbrt 18
    double branch_gap = 0.0;  ///< |pi^2/(6 delta) - delta^2 pi^2 / 108|
};

[[nodiscard]] LowerBound lower_bound_constant();

/// 2 (1 + pi w D / (r P)). InputError unless all four are positive and finite.
[[nodiscard]] double per_domain_upper_bound(double width, double diameter, double inradius, double perimeter);

struct LemmaCheck {
    std::size_t samples = 0;
    std::size_t sign_failures = 0;        ///< bracket sign pattern broken
    std::size_t membership_failures = 0;  ///< y_2 outside its stated range
    std::size_t nonnegativity_failures = 0;
    double max_scaled_residual = 0.0;
    [[nodiscard]] bool ok() const { return sign_failures + membership_failures + nonnegativity_failures == 0; }
};

/// Checks the bracket signs, root membership and the sign of P between the
/// roots (100 samples per interval) on `grid` values of tau in (0,1).
[[nodiscard]] LemmaCheck verify_lemma(std::size_t grid = 1000, unsigned threads = 0);

}  // namespace nsratio
