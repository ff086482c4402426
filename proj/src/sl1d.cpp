#include "nsratio/sl1d.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "nsratio/errors.hpp"

namespace nsratio {

namespace {

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

// Symmetric tridiagonal matrix stored as diagonal + first off-diagonal.
struct Tridiagonal {
    std::vector<double> diag;
    std::vector<double> off;

    explicit Tridiagonal(std::size_t n) : diag(n, 0.0), off(n - 1, 0.0) {}

    void apply(const std::vector<double>& x, std::vector<double>& y) const {
        const std::size_t n = diag.size();
        for (std::size_t i = 0; i < n; ++i) {
            double s = diag[i] * x[i];
            if (i > 0) s += off[i - 1] * x[i - 1];
            if (i + 1 < n) s += off[i] * x[i + 1];
            y[i] = s;
        }
    }

    [[nodiscard]] double quadratic(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t i = 0; i < diag.size(); ++i) {
            s += diag[i] * x[i] * x[i];
            if (i + 1 < diag.size()) s += 2.0 * off[i] * x[i] * x[i + 1];
        }
        return s;
    }
};

// LDL^T of the stiffness matrix with node 0 removed. Rows of the stiffness
// matrix sum to zero, so pinning one node solves A z = b for any b orthogonal
// to the constants.
class PinnedSolver {
public:
    explicit PinnedSolver(const Tridiagonal& a) : d_(a.diag.size(), 0.0), l_(a.diag.size(), 0.0) {
        const std::size_t n = a.diag.size();
        for (std::size_t i = 1; i < n; ++i) {
            double di = a.diag[i];
            if (i > 1) {
                l_[i] = a.off[i - 1] / d_[i - 1];
                di -= l_[i] * l_[i] * d_[i - 1];
            }
            if (!(di > 0.0) || !std::isfinite(di))
                throw ComputationError("sl1d: singular pencil (profile vanishes on a cell)");
            d_[i] = di;
        }
    }

    void solve(const std::vector<double>& b, std::vector<double>& z) const {
        const std::size_t n = d_.size();
        z[0] = 0.0;
        for (std::size_t i = 1; i < n; ++i) z[i] = b[i] - (i > 1 ? l_[i] * z[i - 1] : 0.0);
        for (std::size_t i = 1; i < n; ++i) z[i] /= d_[i];
        for (std::size_t i = n - 1; i > 1; --i) z[i - 1] -= l_[i] * z[i];
    }

private:
    std::vector<double> d_;
    std::vector<double> l_;
};

struct Pencil {
    Tridiagonal stiffness;
    Tridiagonal mass;
    std::vector<double> cell;  // stiffness weight int_e h / |e|^2 per cell

    // Stiffness products in difference form; the assembled diagonal/off-diagonal
    // form cancels catastrophically for smooth vectors on fine meshes.
    [[nodiscard]] double energy(const std::vector<double>& x) const {
        double s = 0.0;
        for (std::size_t e = 0; e < cell.size(); ++e) {
            const double d = x[e + 1] - x[e];
            s += cell[e] * d * d;
        }
        return s;
    }

    void apply_stiffness(const std::vector<double>& x, std::vector<double>& y) const {
        std::fill(y.begin(), y.end(), 0.0);
        for (std::size_t e = 0; e < cell.size(); ++e) {
            const double f = cell[e] * (x[e] - x[e + 1]);
            y[e] += f;
            y[e + 1] -= f;
        }
    }
};

Pencil assemble(const ProfileH& h, Sl1dKind kind, std::size_t n) {
    Pencil p{Tridiagonal(n + 1), Tridiagonal(n + 1), std::vector<double>(n, 0.0)};
    const double dx = 1.0 / static_cast<double>(n);
    const auto& knots = h.knots();
    std::size_t k = 1;  // first knot strictly to the right of the current element start

    for (std::size_t e = 0; e < n; ++e) {
        const double a = static_cast<double>(e) * dx;
        const double b = (e + 1 == n) ? 1.0 : static_cast<double>(e + 1) * dx;
        while (k < knots.size() && knots[k] <= a) ++k;

        double weight = 0.0;            // int_e h
        double maa = 0.0, mab = 0.0, mbb = 0.0;  // int_e h phi_i phi_j
        double left = a;
        double hl = h(a);
        std::size_t kk = k;
        auto add_piece = [&](double right, double hr) {
            const double len = right - left;
            weight += 0.5 * (hl + hr) * len;
            if (kind == Sl1dKind::NeumannWeighted) {
                // integrand cubic: two-point Gauss is exact
                constexpr double g = 0.5773502691896258;
                for (double s : {-g, g}) {
                    const double t = 0.5 * (1.0 + s);
                    const double x = left + t * len;
                    const double hx = hl + t * (hr - hl);
                    const double pb = (x - a) / (b - a);
                    const double pa = 1.0 - pb;
                    const double w = 0.5 * len * hx;
                    maa += w * pa * pa;
                    mab += w * pa * pb;
                    mbb += w * pb * pb;
                }
            }
            left = right;
            hl = hr;
        };
        while (kk < knots.size() && knots[kk] < b) {
            add_piece(knots[kk], h.values()[kk]);
            ++kk;
        }
        add_piece(b, h(b));

        const double len = b - a;
        const double s = weight / (len * len);
        p.stiffness.diag[e] += s;
        p.stiffness.diag[e + 1] += s;
        p.stiffness.off[e] -= s;
        p.cell[e] = s;
        if (kind == Sl1dKind::NeumannWeighted) {
            p.mass.diag[e] += maa;
            p.mass.diag[e + 1] += mbb;
            p.mass.off[e] += mab;
        } else {
            p.mass.diag[e] += len / 3.0;
            p.mass.diag[e + 1] += len / 3.0;
            p.mass.off[e] += len / 6.0;
        }
    }
    return p;
}

SpectralResult galerkin(const ProfileH& h, Sl1dKind kind, std::size_t n, const Sl1dOptions& opt) {
    if (!(h.integral() > 0.0)) throw ComputationError("sl1d: singular pencil (profile identically zero)");
    if (h.min_value() < -kProfileTolerance) throw InputError("sl1d: profile must be nonnegative");
    const Pencil pencil = assemble(h, kind, n);
    const PinnedSolver solver(pencil.stiffness);
    const std::size_t m = n + 1;

    std::vector<double> ones(m, 1.0), mass_ones(m);
    pencil.mass.apply(ones, mass_ones);
    double total_mass = 0.0;
    for (double v : mass_ones) total_mass += v;

    auto deflate = [&](std::vector<double>& z) {
        double c = 0.0;
        for (std::size_t i = 0; i < m; ++i) c += mass_ones[i] * z[i];
        c /= total_mass;
        for (double& v : z) v -= c;
    };

    std::vector<double> x(m), b(m), z(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        x[i] = std::cos(std::numbers::pi * t) + 1e-3 * std::cos(2.0 * std::numbers::pi * t);
    }
    deflate(x);

    std::vector<double> ax(m), mx(m);
    auto residual = [&](double lambda) {
        pencil.apply_stiffness(x, ax);
        pencil.mass.apply(x, mx);
        double rn = 0.0, an = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double r = ax[i] - lambda * mx[i];
            rn += r * r;
            an += ax[i] * ax[i];
        }
        return std::sqrt(rn / an);
    };

    // Stop once the eigenvalue has settled and the eigenvector residual has
    // stopped improving (it lags the eigenvalue by a square root).
    double lambda = 0.0, previous = 0.0, res = 1.0;
    int it = 0;
    bool converged = false;
    for (; it < opt.max_iterations; ++it) {
        pencil.mass.apply(x, b);
        solver.solve(b, z);
        deflate(z);
        const double za = pencil.energy(z);
        const double zm = pencil.mass.quadratic(z);
        lambda = za / zm;
        const double inv = 1.0 / std::sqrt(zm);
        for (std::size_t i = 0; i < m; ++i) x[i] = z[i] * inv;
        if (it > 2 && std::abs(lambda - previous) <= opt.tolerance * std::abs(lambda)) {
            const double r = residual(lambda);
            if (r <= opt.residual_tolerance || r >= 0.5 * res) {
                res = r;
                converged = true;
                ++it;
                break;
            }
            res = r;
        }
        previous = lambda;
    }
    if (!converged) throw ComputationError("sl1d: eigen-iteration did not converge");

    SpectralResult out;
    out.eigenvalue = lambda;
    out.galerkin_eigenvalue = lambda;
    out.eigenvector = std::move(x);
    out.residual = res;
    out.dofs = m;
    out.iterations = it;
    return out;
}

}  // namespace

SpectralResult solve(const Sl1dProblem& problem, const Sl1dOptions& options) {
    const std::size_t n = problem.elements;
    if (n < 8) throw InputError("sl1d: at least 8 elements are required");
    SpectralResult fine = galerkin(problem.profile, problem.kind, n, options);
    if (options.richardson) {
        if (n % 2 != 0 || n < 16)
            throw InputError("sl1d: Richardson extrapolation needs an even element count >= 16");
        const SpectralResult coarse = galerkin(problem.profile, problem.kind, n / 2, options);
        fine.eigenvalue = (4.0 * fine.galerkin_eigenvalue - coarse.galerkin_eigenvalue) / 3.0;
        fine.iterations += coarse.iterations;
    }
    return fine;
}

SpectralResult mu1(const ProfileH& h, const Sl1dOptions& options) {
    return solve({h, Sl1dKind::NeumannWeighted, options.elements}, options);
}

SpectralResult sigma1(const ProfileH& h, const Sl1dOptions& options) {
    return solve({h, Sl1dKind::SteklovWeighted, options.elements}, options);
}

namespace detail {

double linear_ratio_integral(double alpha, double beta, double p, double q, double hp, double hq) {
    const double len = q - p;
    if (len <= 0.0) return 0.0;
    const double zero_tol = 1e-14;
    if (hp <= zero_tol || hq <= zero_tol) {
        if (hp <= zero_tol && hq <= zero_tol)
            throw ComputationError("kernel oracle: profile vanishes on a whole piece");
        // h = m (t - t0) with the zero at t0; the numerator must vanish there too.
        const double t0 = hp <= zero_tol ? p : q;
        const double num0 = alpha + beta * t0;
        if (std::abs(num0) > 1e-12 * (std::abs(alpha) + std::abs(beta)))
            throw ComputationError("kernel oracle: kernel quadrature diverges at a zero of h");
        const double m = (hq - hp) / len;
        return beta / m * len;
    }
    if (std::abs(hq - hp) <= 0.1 * std::min(hp, hq)) {
        double s = 0.0;
        for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
            const double u = 0.5 * (1.0 + kGaussNodes[i]);
            const double t = p + u * len;
            s += kGaussWeights[i] * (alpha + beta * t) / (hp + u * (hq - hp));
        }
        return 0.5 * len * s;
    }
    const double m = (hq - hp) / len;
    const double c1 = beta / m;
    const double c0 = alpha + beta * p - c1 * hp;
    return c1 * len + c0 / m * std::log(hq / hp);
}

}  // namespace detail

KernelOracleResult sigma1_kernel_oracle(const ProfileH& h, std::size_t nodes) {
    if (nodes < 8) throw InputError("kernel oracle: at least 8 quadrature nodes are required");
    if (!(h.integral() > 0.0)) throw ComputationError("kernel oracle: profile identically zero");
    const std::size_t n = nodes;
    const double dx = 1.0 / static_cast<double>(n);

    // Breakpoints: midpoints and profile knots. G0 accumulates t/h from 0,
    // G1 accumulates (1-t)/h from 1.
    std::vector<double> mid(n);
    for (std::size_t j = 0; j < n; ++j) mid[j] = (static_cast<double>(j) + 0.5) * dx;
    std::vector<double> pts;
    pts.reserve(n + h.size());
    std::merge(mid.begin(), mid.end(), h.knots().begin(), h.knots().end(), std::back_inserter(pts));
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    std::vector<double> seg_t(pts.size() - 1), seg_1mt(pts.size() - 1);
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const double p = pts[s], q = pts[s + 1];
        const double hp = h(p), hq = h(q);
        // Only the halves adjacent to the integration limits can hit a zero of h.
        seg_t[s] = (q <= mid.back()) ? detail::linear_ratio_integral(0.0, 1.0, p, q, hp, hq) : 0.0;
        seg_1mt[s] = (p >= mid.front()) ? detail::linear_ratio_integral(1.0, -1.0, p, q, hp, hq) : 0.0;
    }

    std::vector<double> g0(n), g1(n);
    {
        double acc = 0.0;
        std::size_t j = 0;
        for (std::size_t s = 0; s < pts.size() && j < n; ++s) {
            if (pts[s] == mid[j]) g0[j++] = acc;
            if (s < seg_t.size()) acc += seg_t[s];
        }
        acc = 0.0;
        std::size_t jj = n;
        for (std::size_t s = pts.size(); s-- > 0 && jj > 0;) {
            if (pts[s] == mid[jj - 1]) g1[--jj] = acc;
            if (s > 0) acc += seg_1mt[s - 1];
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        if (!std::isfinite(g0[j]) || !std::isfinite(g1[j]))
            throw ComputationError("kernel oracle: kernel quadrature diverges");

    // (T f)_i = dx * [sum_{j<=i} g0_j f_j + g1_i sum_{j<=i} f_j + g0_i sum_{j>i} f_j + sum_{j>i} g1_j f_j]
    auto apply = [&](const std::vector<double>& f, std::vector<double>& out) {
        double total = 0.0;
        for (double v : f) total += v;
        std::vector<double> prefix_g0f(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += g0[i] * f[i];
            prefix_g0f[i] = acc;
        }
        double suffix_g1f = 0.0;
        for (std::size_t i = n; i-- > 0;) {
            out[i] = suffix_g1f;  // sum_{j>i} g1_j f_j
            suffix_g1f += g1[i] * f[i];
        }
        double prefix_f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            prefix_f += f[i];
            out[i] = dx * (prefix_g0f[i] + g1[i] * prefix_f + g0[i] * (total - prefix_f) + out[i]);
        }
    };
    auto center = [&](std::vector<double>& f) {
        double mean = 0.0;
        for (double v : f) mean += v;
        mean /= static_cast<double>(n);
        for (double& v : f) v -= mean;
    };

    std::vector<double> f(n), tf(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = std::cos(std::numbers::pi * mid[j]);
    center(f);
    double lambda = 0.0, previous = 0.0;
    int it = 0;
    for (; it < 5000; ++it) {
        double norm = 0.0;
        for (double v : f) norm += v * v;
        norm = std::sqrt(norm);
        for (double& v : f) v /= norm;
        apply(f, tf);
        center(tf);
        double num = 0.0;
        for (std::size_t j = 0; j < n; ++j) num += f[j] * tf[j];
        lambda = num;
        f.swap(tf);
        if (it > 2 && std::abs(lambda - previous) <= 1e-14 * std::abs(lambda)) break;
        previous = lambda;
    }
    if (!(lambda > 0.0)) throw ComputationError("kernel oracle: operator has no positive eigenvalue");
    return {1.0 / lambda, n, it + 1};
}

FResult F_of_h(const ProfileH& h, const Sl1dOptions& options) {
    const SpectralResult mu = mu1(h, options);
    const SpectralResult sigma = sigma1(h, options);
    FResult r;
    r.mu1 = mu.eigenvalue;
    r.sigma1 = sigma.eigenvalue;
    r.integral = h.integral();
    r.F = r.mu1 * r.integral / r.sigma1;
    r.mu1_residual = mu.residual;
    r.sigma1_residual = sigma.residual;
    return r;
}

}  // namespace nsratio
