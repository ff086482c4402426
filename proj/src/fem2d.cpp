#include "nsratio/fem2d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "nsratio/errors.hpp"
#include "nsratio/format.hpp"
#include "nsratio/parallel.hpp"
#include "nsratio/sl1d.hpp"

namespace nsratio {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Eigen::MatrixXd;
using Eigen::VectorXd;

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Six-point rule exact for degree 4 on the reference triangle (weights sum to 1).
struct QuadPoint {
    double l0, l1, l2, w;
};
constexpr double kA1 = 0.445948490915965, kB1 = 1.0 - 2.0 * kA1, kW1 = 0.223381589678011;
constexpr double kA2 = 0.091576213509771, kB2 = 1.0 - 2.0 * kA2, kW2 = 0.109951743655322;
constexpr QuadPoint kRule[6] = {{kA1, kA1, kB1, kW1}, {kA1, kB1, kA1, kW1}, {kB1, kA1, kA1, kW1},
                                {kA2, kA2, kB2, kW2}, {kA2, kB2, kA2, kW2}, {kB2, kA2, kA2, kW2}};

const char* kind_name(EigenKind k) { return k == EigenKind::Neumann ? "neumann" : "steklov"; }

}  // namespace

P2Space p2_space(const TriangleMesh& m) {
    if (m.triangles.empty()) throw InputError("p2_space: empty mesh");
    P2Space s;
    s.points = m.nodes;
    std::unordered_map<std::uint64_t, int> mid;
    mid.reserve(m.triangles.size() * 2);
    auto midpoint = [&](int a, int b) {
        const auto [it, fresh] = mid.emplace(edge_key(a, b), static_cast<int>(s.points.size()));
        if (fresh) s.points.push_back(0.5 * (m.nodes[static_cast<std::size_t>(a)] + m.nodes[static_cast<std::size_t>(b)]));
        return it->second;
    };
    s.element.reserve(m.triangles.size());
    for (const auto& t : m.triangles)
        s.element.push_back({t[0], t[1], t[2], midpoint(t[0], t[1]), midpoint(t[1], t[2]), midpoint(t[2], t[0])});
    for (const auto& e : m.boundary_edges) {
        const auto it = mid.find(edge_key(e[0], e[1]));
        if (it == mid.end()) throw InputError("p2_space: boundary edge not in any triangle");
        s.boundary.push_back({e[0], e[1], it->second});
    }
    return s;
}

P2Matrices assemble_p2(const P2Space& s) {
    const auto n = static_cast<Eigen::Index>(s.points.size());
    std::vector<Eigen::Triplet<double>> tk, tm, tb;
    tk.reserve(s.element.size() * 36);
    tm.reserve(s.element.size() * 36);
    for (const auto& e : s.element) {
        const Vec2 p0 = s.points[static_cast<std::size_t>(e[0])], p1 = s.points[static_cast<std::size_t>(e[1])],
                   p2 = s.points[static_cast<std::size_t>(e[2])];
        const double area2 = orient(p0, p1, p2);
        if (!(area2 > 0.0)) throw InputError("assemble_p2: degenerate or clockwise triangle");
        const double area = 0.5 * area2;
        const Vec2 g[3] = {{(p1.y - p2.y) / area2, (p2.x - p1.x) / area2},
                           {(p2.y - p0.y) / area2, (p0.x - p2.x) / area2},
                           {(p0.y - p1.y) / area2, (p1.x - p0.x) / area2}};
        double ke[6][6] = {}, me[6][6] = {};
        for (const QuadPoint& q : kRule) {
            const double L[3] = {q.l0, q.l1, q.l2};
            double phi[6];
            Vec2 grad[6];
            for (int i = 0; i < 3; ++i) {
                phi[i] = L[i] * (2.0 * L[i] - 1.0);
                grad[i] = (4.0 * L[i] - 1.0) * g[i];
            }
            for (int k = 0; k < 3; ++k) {
                const int i = k, j = (k + 1) % 3;
                phi[3 + k] = 4.0 * L[i] * L[j];
                grad[3 + k] = 4.0 * (L[i] * g[j] + L[j] * g[i]);
            }
            const double w = q.w * area;
            for (int i = 0; i < 6; ++i)
                for (int j = 0; j < 6; ++j) {
                    ke[i][j] += w * dot(grad[i], grad[j]);
                    me[i][j] += w * phi[i] * phi[j];
                }
        }
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                tk.emplace_back(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)], ke[i][j]);
                tm.emplace_back(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)], me[i][j]);
            }
    }
    static constexpr double kEdge[3][3] = {{4.0, -1.0, 2.0}, {-1.0, 4.0, 2.0}, {2.0, 2.0, 16.0}};
    for (const auto& b : s.boundary) {
        const double len = norm(s.points[static_cast<std::size_t>(b[1])] - s.points[static_cast<std::size_t>(b[0])]);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                tb.emplace_back(b[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)], len / 30.0 * kEdge[i][j]);
    }
    P2Matrices A;
    A.K.resize(n, n);
    A.M.resize(n, n);
    A.B.resize(n, n);
    A.K.setFromTriplets(tk.begin(), tk.end());
    A.M.setFromTriplets(tm.begin(), tm.end());
    A.B.setFromTriplets(tb.begin(), tb.end());
    return A;
}

EigenPair2D smallest_nonzero(const P2Matrices& A, const std::vector<Vec2>& points, EigenKind kind,
                             const EigenOptions& opt) {
    const SpMat& K = A.K;
    const SpMat& W = kind == EigenKind::Neumann ? A.M : A.B;
    const Eigen::Index n = K.rows();
    const int p = std::max(2, opt.block);
    if (n < p + 2) throw InputError("smallest_nonzero: mesh too coarse for the requested block");

    const VectorXd one = VectorXd::Ones(n);
    const VectorXd Wone = W * one;
    const double wmass = one.dot(Wone);
    if (!(wmass > 0.0)) throw ComputationError(std::string(kind_name(kind)) + ": zero mass");
    auto deflate = [&](auto&& y) { y -= (Wone.dot(y) / wmass) * one; };

    MatrixXd X(n, p);
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec2 q = points[static_cast<std::size_t>(i)];
        X(i, 0) = q.x;
        X(i, 1) = q.y;
        if (p > 2) X(i, 2) = q.x * q.y;
        if (p > 3) X(i, 3) = q.x * q.x - q.y * q.y;
        for (int c = 4; c < p; ++c) X(i, c) = U(rng);
    }
    double estimate = 1e300;
    for (int c = 0; c < p; ++c) {
        deflate(X.col(c));
        if (c < 2) {
            const VectorXd v = X.col(c);
            const double wv = v.dot(W * v);
            if (wv > 0.0) estimate = std::min(estimate, v.dot(K * v) / wv);
        }
    }
    if (!(estimate < 1e300) || !(estimate > 0.0)) throw ComputationError(std::string(kind_name(kind)) + ": degenerate mesh");
    const double alpha = 0.1 * estimate;

    const SpMat shifted = K + alpha * W;
    Eigen::SimplicialLDLT<SpMat> solver(shifted);
    if (solver.info() != Eigen::Success) throw ComputationError(std::string(kind_name(kind)) + ": factorization failed");

    // W-orthonormalization by twice-repeated Gram-Schmidt; columns that vanish are
    // replaced by fresh random directions.
    auto orthonormalize = [&](MatrixXd& Y) {
        for (int c = 0; c < p; ++c) {
            for (int attempt = 0; attempt < 3; ++attempt) {
                for (int pass = 0; pass < 2; ++pass) {
                    const VectorXd wy = W * Y.col(c);
                    for (int k = 0; k < c; ++k) Y.col(c) -= Y.col(k).dot(wy) * Y.col(k);
                }
                const double nn = std::sqrt(std::max(0.0, Y.col(c).dot(W * Y.col(c))));
                if (nn > 1e-300 && std::isfinite(nn)) {
                    Y.col(c) /= nn;
                    break;
                }
                VectorXd r(n);
                for (Eigen::Index i = 0; i < n; ++i) r(i) = U(rng);
                deflate(r);
                Y.col(c) = solver.solve(W * r);
                deflate(Y.col(c));
            }
        }
    };

    EigenPair2D out;
    out.kind = kind;
    out.dofs = static_cast<std::size_t>(n);
    orthonormalize(X);
    double lambda = 0.0, residual = 1e300;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        MatrixXd Y = solver.solve(W * X);
        if (solver.info() != Eigen::Success) throw ComputationError(std::string(kind_name(kind)) + ": solve failed");
        for (int c = 0; c < p; ++c) deflate(Y.col(c));
        orthonormalize(Y);
        const MatrixXd Kr = Y.transpose() * (K * Y);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (Kr + Kr.transpose()));
        X = Y * es.eigenvectors();
        lambda = es.eigenvalues()(0);
        const VectorXd x = X.col(0);
        const VectorXd wx = W * x;
        residual = (K * x - lambda * wx).norm() / (std::abs(lambda) * wx.norm());
        if (residual <= opt.tolerance) {
            ++it;
            break;
        }
    }
    out.eigenvalue = lambda;
    out.residual = residual;
    out.iterations = it;
    if (!(residual <= 1e-9) || !(lambda > 0.0))
        throw ComputationError(std::string(kind_name(kind)) + ": eigen-iteration did not converge (residual " +
                               num(residual) + " after " + std::to_string(it) + " iterations)");
    return out;
}

EigenPair2D neumann_mu1(const TriangleMesh& m, const EigenOptions& options) {
    const P2Space s = p2_space(m);
    auto r = smallest_nonzero(assemble_p2(s), s.points, EigenKind::Neumann, options);
    r.h_max = m.h_max;
    return r;
}

EigenPair2D steklov_sigma1(const TriangleMesh& m, const EigenOptions& options) {
    const P2Space s = p2_space(m);
    auto r = smallest_nonzero(assemble_p2(s), s.points, EigenKind::Steklov, options);
    r.h_max = m.h_max;
    return r;
}

DomainRecord evaluate_mesh(const TriangleMesh& m, const EigenOptions& options) {
    const P2Space s = p2_space(m);
    const P2Matrices A = assemble_p2(s);
    const EigenPair2D mu = smallest_nonzero(A, s.points, EigenKind::Neumann, options);
    const EigenPair2D sg = smallest_nonzero(A, s.points, EigenKind::Steklov, options);
    DomainRecord r;
    for (const auto& t : m.triangles)
        r.area += 0.5 * orient(m.nodes[static_cast<std::size_t>(t[0])], m.nodes[static_cast<std::size_t>(t[1])],
                               m.nodes[static_cast<std::size_t>(t[2])]);
    for (const auto& e : m.boundary_edges)
        r.perimeter += norm(m.nodes[static_cast<std::size_t>(e[1])] - m.nodes[static_cast<std::size_t>(e[0])]);
    r.mu1 = mu.eigenvalue;
    r.sigma1 = sg.eigenvalue;
    r.x = r.sigma1 * r.perimeter;
    r.y = r.mu1 * r.area;
    r.F = r.y / r.x;
    r.dofs = mu.dofs;
    r.h_max = m.h_max;
    r.min_angle_deg = m.min_angle_deg;
    r.quality_warning = m.quality_warning;
    r.mu1_residual = mu.residual;
    r.sigma1_residual = sg.residual;
    return r;
}

DomainRecord F_of_domain(const ConvexPolygon& p, double h_max, const EigenOptions& options) {
    DomainRecord r = evaluate_mesh(mesh_polygon(p, h_max), options);
    r.area = p.area();
    r.perimeter = p.perimeter();
    r.x = r.sigma1 * r.perimeter;
    r.y = r.mu1 * r.area;
    r.F = r.y / r.x;
    return r;
}

double extrapolate_to_zero(const double x[3], const double y[3]) {
    return y[0] * x[1] * x[2] / ((x[0] - x[1]) * (x[0] - x[2])) + y[1] * x[0] * x[2] / ((x[1] - x[0]) * (x[1] - x[2])) +
           y[2] * x[0] * x[1] / ((x[2] - x[0]) * (x[2] - x[1]));
}

ThinSweep thin_sweep(const ProfileH& hplus, const ProfileH& hminus, const std::vector<double>& eps,
                     const ThinOptions& options) {
    if (eps.size() < 3) throw InputError("thin_sweep: at least 3 values of eps are required");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw InputError("thin_sweep: eps must be positive");
        if (i > 0 && !(eps[i] < eps[i - 1])) throw InputError("thin_sweep: eps must be strictly decreasing");
    }
    for (const ProfileH* h : {&hplus, &hminus})
        if (!validate(*h).valid) throw InputError("thin_sweep: profiles must be nonnegative and concave");

    ThinSweep out;
    out.rows.resize(eps.size());
    parallel_for(
        eps.size(),
        [&](std::size_t i) {
            const TriangleMesh m = structured_thin_mesh(hplus, hminus, eps[i], options.columns, options.min_layers);
            out.rows[i].eps = eps[i];
            out.rows[i].record = evaluate_mesh(m);
            out.rows[i].scaled_sigma = 2.0 * out.rows[i].record.sigma1 / eps[i];
        },
        options.threads);

    const std::size_t k = eps.size() - 3;
    const double x[3] = {eps[k], eps[k + 1], eps[k + 2]};
    double mu[3], ss[3], F[3];
    for (int i = 0; i < 3; ++i) {
        const auto& r = out.rows[k + static_cast<std::size_t>(i)];
        mu[i] = r.record.mu1;
        ss[i] = r.scaled_sigma;
        F[i] = r.record.F;
    }
    out.mu1_limit = extrapolate_to_zero(x, mu);
    out.scaled_sigma_limit = extrapolate_to_zero(x, ss);
    out.F_limit = extrapolate_to_zero(x, F);

    const FResult ref = F_of_h(hplus + hminus);
    out.mu1_h = ref.mu1;
    out.sigma1_h = ref.sigma1;
    out.F_h = ref.F;
    return out;
}

}  // namespace nsratio
