#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsratio {

/// Piecewise-linear profile h on [0,1].
///
/// Knots are strictly increasing, start at 0 and end at 1; values are the
/// ordinates at the knots. Construction only checks the representation
/// (sizes, ordering, finiteness); membership in the admissible class of
/// nonnegative concave profiles is checked by validate().
class ProfileH {
public:
    ProfileH(std::vector<double> knots, std::vector<double> values);

    [[nodiscard]] const std::vector<double>& knots() const noexcept { return knots_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return knots_.size(); }

    /// Linear interpolation; x is clamped to [0,1].
    [[nodiscard]] double operator()(double x) const;

    /// Exact integral over [0,1] (trapezoid rule on the knots).
    [[nodiscard]] double integral() const;

    /// Exact integral over [a,b] with 0 <= a <= b <= 1.
    [[nodiscard]] double integral(double a, double b) const;

    [[nodiscard]] double max_value() const;
    [[nodiscard]] double min_value() const;

    [[nodiscard]] ProfileH scaled(double k) const;

    /// Profile 1 + t*phi on the knot set of phi.
    [[nodiscard]] static ProfileH one_plus(double t, const ProfileH& phi);

private:
    std::vector<double> knots_;
    std::vector<double> values_;
};

/// Pointwise sum on the union of both knot sets.
[[nodiscard]] ProfileH operator+(const ProfileH& a, const ProfileH& b);

enum class ViolationKind { Negative, Concavity };

struct Violation {
    ViolationKind kind;
    std::size_t knot;
    double amount;  ///< how far past the tolerance the knot is
};

struct ValidityReport {
    bool valid = false;       ///< nonnegative and concave
    bool normalized = false;  ///< integral equals 1 within 1e-12
    double integral = 0.0;
    std::vector<Violation> violations;
};

inline constexpr double kProfileTolerance = 1e-12;

[[nodiscard]] ValidityReport validate(const ProfileH& h);

/// Raw-data overload; throws InputError on an empty or inconsistent knot list.
[[nodiscard]] ValidityReport validate(std::span<const double> knots, std::span<const double> values);

/// Scale ordinates so that the integral is 1. Throws InputError for a zero profile.
[[nodiscard]] ProfileH normalize(const ProfileH& h);

[[nodiscard]] ProfileH constant_profile(double c = 1.0);

/// Tent with peak 1 at x0: knots {0, x0, 1}, values {0, 1, 0}.
[[nodiscard]] ProfileH triangular(double x0);

/// 6x(1-x) sampled on `samples` uniform knots, then normalized.
[[nodiscard]] ProfileH parabolic_star(std::size_t samples = 2001);

/// Piecewise-linear sampling of an arbitrary function on `samples` uniform knots.
template <class Fn>
[[nodiscard]] ProfileH sample_profile(Fn&& fn, std::size_t samples) {
    std::vector<double> x(samples), y(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        x[i] = static_cast<double>(i) / static_cast<double>(samples - 1);
        y[i] = fn(x[i]);
    }
    x.back() = 1.0;
    return ProfileH(std::move(x), std::move(y));
}

/// L2-nearest concave sequence with nonnegative endpoint values on fixed
/// knots (no renormalization). Solved exactly as the dual nonnegative
/// least-squares problem.
[[nodiscard]] std::vector<double> concave_regression(std::span<const double> knots,
                                                     std::span<const double> values);

/// concave_regression followed by normalization. Throws InputError when the
/// projection is identically zero.
[[nodiscard]] ProfileH project_concave(std::span<const double> knots, std::span<const double> values);

/// min of h(x) / (x(1-x)) over the interior knots and a uniform grid of 999
/// interior points; positive for profiles that are strictly positive inside.
[[nodiscard]] double interior_lower_constant(const ProfileH& h);

/// JSON object {"knots": [...], "values": [...]}.
[[nodiscard]] std::string to_json(const ProfileH& h);
[[nodiscard]] ProfileH profile_from_json(const std::string& text);

/// CLI profile spec: "const", "parabolic", "tent:<x0>", or a path to a JSON profile file.
[[nodiscard]] ProfileH parse_profile_spec(const std::string& spec);

}  // namespace nsratio
