#pragma once

#include <utility>

namespace nsratio {

/// Bessel functions of the first kind, orders 0 and 1, for x >= 0.
/// Power series (extended precision) up to kBesselSeriesSwitch, Miller
/// backward recurrence beyond.
inline constexpr double kBesselSeriesSwitch = 12.0;

[[nodiscard]] double bessel_j0(double x);
[[nodiscard]] double bessel_j1(double x);
/// J0' = -J1
[[nodiscard]] double bessel_j0_prime(double x);
/// J1' = J0 - J1/x, with J1'(0) = 1/2
[[nodiscard]] double bessel_j1_prime(double x);

namespace detail {
[[nodiscard]] double bessel_series(int order, double x);
[[nodiscard]] double bessel_recurrence(int order, double x);
}  // namespace detail

/// First zero of J0 and of J1', located by scan + bisection on the functions above.
[[nodiscard]] double first_zero_j0();
[[nodiscard]] double first_zero_j1_prime();

enum class TentEquation { SteklovTent, NeumannTent };

struct TranscendentalRoot {
    double value = 0.0;  ///< sigma (SteklovTent) or mu (NeumannTent)
    TentEquation equation = TentEquation::SteklovTent;
    double x0 = 0.5;
    std::pair<double, double> bracket;  ///< scan interval in eigenvalue units
    double residual = 0.0;              ///< |equation(value)|
};

/// J0(2 sqrt(s) x0) J0'(2 sqrt(s)(1-x0)) + J0(2 sqrt(s)(1-x0)) J0'(2 sqrt(s) x0)
[[nodiscard]] double steklov_tent_equation(double sigma, double x0);
/// J0(sqrt(m) x0) J0'(sqrt(m)(1-x0)) + J0(sqrt(m)(1-x0)) J0'(sqrt(m) x0)
[[nodiscard]] double neumann_tent_equation(double mu, double x0);

/// Smallest positive root of the Steklov matching equation: sigma_1 of the
/// tent profile with peak 1 at x0. Throws InputError for x0 outside (0,1) and
/// ComputationError when no sign change is found.
[[nodiscard]] TranscendentalRoot sigma1_tent(double x0);
/// Smallest positive root of the Neumann matching equation: mu_1 of the tent.
[[nodiscard]] TranscendentalRoot mu1_tent(double x0);

}  // namespace nsratio
