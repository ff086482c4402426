#include "nsratio/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "nsratio/errors.hpp"

namespace nsratio {

namespace {

void check_representation(std::span<const double> knots, std::span<const double> values) {
    if (knots.empty()) throw InputError("profile: empty knot list");
    if (knots.size() != values.size())
        throw InputError("profile: knots and values differ in length");
    if (knots.size() < 2) throw InputError("profile: at least two knots are required");
    if (knots.front() != 0.0 || knots.back() != 1.0)
        throw InputError("profile: knots must start at 0 and end at 1");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i]) || !std::isfinite(values[i]))
            throw InputError("profile: non-finite knot or value at index " + std::to_string(i));
        if (i > 0 && !(knots[i] > knots[i - 1]))
            throw InputError("profile: knots not strictly increasing at index " + std::to_string(i));
    }
}

// Slope-difference tolerance at interior knot i: the nominal 1e-12 plus the
// rounding error of the divided differences themselves.
double concavity_tolerance(std::span<const double> x, std::span<const double> v, std::size_t i) {
    const double dx = std::min(x[i] - x[i - 1], x[i + 1] - x[i]);
    const double scale = std::abs(v[i - 1]) + 2.0 * std::abs(v[i]) + std::abs(v[i + 1]);
    return kProfileTolerance + 8.0 * std::numeric_limits<double>::epsilon() * scale / dx;
}

double slope_drop(std::span<const double> x, std::span<const double> v, std::size_t i) {
    const double left = (v[i] - v[i - 1]) / (x[i] - x[i - 1]);
    const double right = (v[i + 1] - v[i]) / (x[i + 1] - x[i]);
    return left - right;  // >= 0 for concave
}

bool is_concave_nonnegative(std::span<const double> x, std::span<const double> v) {
    if (v.front() < -kProfileTolerance || v.back() < -kProfileTolerance) return false;
    for (std::size_t i = 1; i + 1 < x.size(); ++i)
        if (slope_drop(x, v, i) < -concavity_tolerance(x, v, i)) return false;
    return true;
}

// Lawson-Hanson active-set solver for min ||A l - b|| subject to l >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    const Eigen::Index n = A.cols();
    Eigen::VectorXd l = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);
    const double tol = 1e-12 * (1.0 + b.norm()) * (1.0 + A.cwiseAbs().maxCoeff());

    auto solve_passive = [&]() {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < n; ++j)
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
        Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);
        Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
        for (std::size_t k = 0; k < idx.size(); ++k) s[idx[k]] = sp[static_cast<Eigen::Index>(k)];
        return s;
    };

    for (int outer = 0; outer < 3 * n + 10; ++outer) {
        Eigen::VectorXd w = A.transpose() * (b - A * l);
        Eigen::Index t = -1;
        double wmax = tol;
        for (Eigen::Index j = 0; j < n; ++j)
            if (!passive[static_cast<std::size_t>(j)] && w[j] > wmax) {
                wmax = w[j];
                t = j;
            }
        if (t < 0) break;
        passive[static_cast<std::size_t>(t)] = true;

        for (int inner = 0; inner < 3 * n + 10; ++inner) {
            Eigen::VectorXd s = solve_passive();
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0) feasible = false;
            if (feasible) {
                l = s;
                break;
            }
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && s[j] <= 0.0)
                    alpha = std::min(alpha, l[j] / (l[j] - s[j]));
            l += alpha * (s - l);
            for (Eigen::Index j = 0; j < n; ++j)
                if (passive[static_cast<std::size_t>(j)] && l[j] <= tol * 1e-3) {
                    passive[static_cast<std::size_t>(j)] = false;
                    l[j] = 0.0;
                }
        }
    }
    return l;
}

}  // namespace

ProfileH::ProfileH(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    check_representation(knots_, values_);
    for (double& v : values_)
        if (v < 0.0 && v > -kProfileTolerance) v = 0.0;
}

double ProfileH::operator()(double x) const {
    if (x <= 0.0) return values_.front();
    if (x >= 1.0) return values_.back();
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    const auto i = static_cast<std::size_t>(it - knots_.begin());
    const double x0 = knots_[i - 1], x1 = knots_[i];
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * values_[i - 1] + w * values_[i];
}

double ProfileH::integral() const {
    double s = 0.0;
    for (std::size_t i = 1; i < knots_.size(); ++i)
        s += 0.5 * (values_[i] + values_[i - 1]) * (knots_[i] - knots_[i - 1]);
    return s;
}

double ProfileH::integral(double a, double b) const {
    a = std::clamp(a, 0.0, 1.0);
    b = std::clamp(b, 0.0, 1.0);
    if (b <= a) return 0.0;
    double s = 0.0;
    double left = a;
    double hleft = (*this)(a);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), a);
    for (; it != knots_.end() && *it < b; ++it) {
        const auto i = static_cast<std::size_t>(it - knots_.begin());
        s += 0.5 * (hleft + values_[i]) * (*it - left);
        left = *it;
        hleft = values_[i];
    }
    s += 0.5 * (hleft + (*this)(b)) * (b - left);
    return s;
}

double ProfileH::max_value() const { return *std::max_element(values_.begin(), values_.end()); }
double ProfileH::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

ProfileH ProfileH::scaled(double k) const {
    std::vector<double> v = values_;
    for (double& y : v) y *= k;
    return ProfileH(knots_, std::move(v));
}

ProfileH ProfileH::one_plus(double t, const ProfileH& phi) {
    std::vector<double> v = phi.values();
    for (double& y : v) y = 1.0 + t * y;
    return ProfileH(phi.knots(), std::move(v));
}

ProfileH operator+(const ProfileH& a, const ProfileH& b) {
    std::vector<double> x;
    x.reserve(a.size() + b.size());
    std::merge(a.knots().begin(), a.knots().end(), b.knots().begin(), b.knots().end(),
               std::back_inserter(x));
    x.erase(std::unique(x.begin(), x.end(), [](double p, double q) { return std::abs(p - q) < 1e-15; }),
            x.end());
    x.front() = 0.0;
    x.back() = 1.0;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a(x[i]) + b(x[i]);
    return ProfileH(std::move(x), std::move(y));
}

ValidityReport validate(const ProfileH& h) {
    const auto& x = h.knots();
    const auto& v = h.values();
    ValidityReport r;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] < -kProfileTolerance) r.violations.push_back({ViolationKind::Negative, i, -v[i]});
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const double drop = slope_drop(x, v, i);
        const double tol = concavity_tolerance(x, v, i);
        if (drop < -tol) r.violations.push_back({ViolationKind::Concavity, i, -drop});
    }
    r.valid = r.violations.empty();
    r.integral = h.integral();
    r.normalized = std::abs(r.integral - 1.0) <= kProfileTolerance;
    return r;
}

ValidityReport validate(std::span<const double> knots, std::span<const double> values) {
    check_representation(knots, values);
    return validate(ProfileH({knots.begin(), knots.end()}, {values.begin(), values.end()}));
}

ProfileH normalize(const ProfileH& h) {
    const double s = h.integral();
    if (!(s > 0.0)) throw InputError("normalize: profile has zero integral");
    return h.scaled(1.0 / s);
}

ProfileH constant_profile(double c) { return ProfileH({0.0, 1.0}, {c, c}); }

ProfileH triangular(double x0) {
    if (!(x0 > 0.0 && x0 < 1.0)) throw InputError("triangular: x0 must lie in (0,1)");
    return ProfileH({0.0, x0, 1.0}, {0.0, 1.0, 0.0});
}

ProfileH parabolic_star(std::size_t samples) {
    if (samples < 3) throw InputError("parabolic_star: need at least 3 samples");
    return normalize(sample_profile([](double x) { return 6.0 * x * (1.0 - x); }, samples));
}

std::vector<double> concave_regression(std::span<const double> knots, std::span<const double> values) {
    check_representation(knots, values);
    const std::size_t n = knots.size();
    if (is_concave_nonnegative(knots, values)) return {values.begin(), values.end()};

    // Constraint rows C z <= 0: slope increases at interior knots, and -z at both ends.
    double dmin = 1.0;
    for (std::size_t i = 1; i < n; ++i) dmin = std::min(dmin, knots[i] - knots[i - 1]);
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(ni, ni);
    Eigen::Index row = 0;
    for (std::size_t i = 1; i + 1 < n; ++i, ++row) {
        const double dl = knots[i] - knots[i - 1];
        const double dr = knots[i + 1] - knots[i];
        const auto c = static_cast<Eigen::Index>(i);
        C(row, c - 1) = dmin / dl;
        C(row, c) = -dmin / dl - dmin / dr;
        C(row, c + 1) = dmin / dr;
    }
    C(row++, 0) = -1.0;
    C(row++, ni - 1) = -1.0;

    Eigen::VectorXd y(ni);
    for (Eigen::Index i = 0; i < ni; ++i) y[i] = values[static_cast<std::size_t>(i)];
    const Eigen::VectorXd lambda = nnls(C.transpose(), y);
    const Eigen::VectorXd zq = y - C.transpose() * lambda;
    std::vector<double> z(zq.data(), zq.data() + zq.size());

    // Clean-up from the active set: a positive multiplier at an interior knot
    // means the knot lies on the segment joining its free neighbours, and at an
    // end means the value is 0. Re-imposing this exactly removes the solver's
    // residual, which is amplified by 1/dx in the slopes.
    std::vector<bool> active(n, false);
    for (std::size_t i = 1; i + 1 < n; ++i) active[i] = lambda[static_cast<Eigen::Index>(i - 1)] > 0.0;
    if (lambda[ni - 2] > 0.0) z.front() = 0.0;
    if (lambda[ni - 1] > 0.0) z.back() = 0.0;
    std::size_t left = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (active[i]) continue;
        for (std::size_t k = left + 1; k < i; ++k) {
            const double w = (knots[k] - knots[left]) / (knots[i] - knots[left]);
            z[k] = (1.0 - w) * z[left] + w * z[i];
        }
        left = i;
    }
    return z;
}

ProfileH project_concave(std::span<const double> knots, std::span<const double> values) {
    std::vector<double> z = concave_regression(knots, values);
    double scale = 0.0;
    for (double v : values) scale = std::max(scale, std::abs(v));
    for (double& v : z)
        if (v < 0.0) v = 0.0;
    ProfileH h({knots.begin(), knots.end()}, std::move(z));
    if (!(h.max_value() > 1e-12 * scale)) throw InputError("project_concave: projection is identically zero");
    return normalize(h);
}

double interior_lower_constant(const ProfileH& h) {
    // Interior knots plus a uniform grid, so profiles without interior knots are covered too.
    double k = std::numeric_limits<double>::infinity();
    const auto& x = h.knots();
    for (std::size_t i = 1; i + 1 < x.size(); ++i) k = std::min(k, h.values()[i] / (x[i] * (1.0 - x[i])));
    constexpr int kGrid = 1000;
    for (int i = 1; i < kGrid; ++i) {
        const double t = static_cast<double>(i) / kGrid;
        k = std::min(k, h(t) / (t * (1.0 - t)));
    }
    return k;
}

std::string to_json(const ProfileH& h) {
    nlohmann::json j;
    j["knots"] = h.knots();
    j["values"] = h.values();
    return j.dump();
}

ProfileH profile_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("profile: invalid JSON: ") + e.what());
    }
    if (!j.contains("knots") || !j.contains("values"))
        throw InputError("profile: JSON object needs 'knots' and 'values'");
    return ProfileH(j.at("knots").get<std::vector<double>>(), j.at("values").get<std::vector<double>>());
}

ProfileH parse_profile_spec(const std::string& spec) {
    if (spec == "const") return constant_profile(1.0);
    if (spec == "parabolic") return parabolic_star();
    if (spec.rfind("tent:", 0) == 0) {
        double x0 = 0.0;
        try {
            x0 = std::stod(spec.substr(5));
        } catch (const std::exception&) {
            throw InputError("profile: cannot parse tent peak in '" + spec + "'");
        }
        return triangular(x0);
    }
    std::ifstream in(spec);
    if (!in) throw InputError("profile: cannot open '" + spec + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return profile_from_json(ss.str());
}

}  // namespace nsratio
