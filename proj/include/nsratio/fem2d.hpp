#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/SparseCore>

#include "nsratio/geom2d.hpp"
#include "nsratio/mesh.hpp"
#include "nsratio/profile.hpp"

namespace nsratio {

enum class EigenKind { Neumann, Steklov };

struct EigenPair2D {
    double eigenvalue = 0.0;
    EigenKind kind = EigenKind::Neumann;
    std::size_t dofs = 0;
    double h_max = 0.0;
    double residual = 0.0;  ///< ||K x - l W x|| / (l ||W x||), W the mass (M or B)
    int iterations = 0;
};

/// Quadratic Lagrange space on a mesh: corner nodes first, then one node per edge.
struct P2Space {
    std::vector<Vec2> points;                 ///< coordinates of all degrees of freedom
    std::vector<std::array<int, 6>> element;  ///< corners a,b,c then midpoints ab, bc, ca
    std::vector<std::array<int, 3>> boundary; ///< endpoints then midpoint, per boundary edge
};

[[nodiscard]] P2Space p2_space(const TriangleMesh& m);

struct P2Matrices {
    Eigen::SparseMatrix<double> K;  ///< stiffness
    Eigen::SparseMatrix<double> M;  ///< domain mass
    Eigen::SparseMatrix<double> B;  ///< boundary mass
};

/// Exact assembly for affine P2 elements (six-point degree-4 rule on triangles,
/// closed-form edge mass on the boundary).
[[nodiscard]] P2Matrices assemble_p2(const P2Space& space);

struct EigenOptions {
    double tolerance = 1e-10;  ///< stop when the relative residual drops below this
    int max_iterations = 1000;
    int block = 6;
};

/// Smallest nonzero eigenvalue of K x = l W x, with W = M (Neumann) or B
/// (Steklov): shift-invert subspace iteration on K + alpha W with the constant
/// mode removed in the W inner product, Rayleigh-Ritz on each block.
/// Throws ComputationError if the residual is not below 1e-9 at the end.
[[nodiscard]] EigenPair2D smallest_nonzero(const P2Matrices& A, const std::vector<Vec2>& points, EigenKind kind,
                                           const EigenOptions& options = {});

[[nodiscard]] EigenPair2D neumann_mu1(const TriangleMesh& m, const EigenOptions& options = {});
[[nodiscard]] EigenPair2D steklov_sigma1(const TriangleMesh& m, const EigenOptions& options = {});

struct DomainRecord {
    double area = 0.0;
    double perimeter = 0.0;
    double mu1 = 0.0;
    double sigma1 = 0.0;
    double x = 0.0;  ///< sigma1 * perimeter
    double y = 0.0;  ///< mu1 * area
    double F = 0.0;  ///< y / x
    std::size_t dofs = 0;
    double h_max = 0.0;  ///< achieved longest edge
    double min_angle_deg = 0.0;
    bool quality_warning = false;
    double mu1_residual = 0.0;
    double sigma1_residual = 0.0;
};

/// Both eigenvalues on one mesh (shared assembly). Area and perimeter are those
/// of the polygon, which the mesh reproduces exactly.
[[nodiscard]] DomainRecord evaluate_mesh(const TriangleMesh& m, const EigenOptions& options = {});
[[nodiscard]] DomainRecord F_of_domain(const ConvexPolygon& p, double h_max, const EigenOptions& options = {});

struct ThinRow {
    double eps = 0.0;
    DomainRecord record;
    double scaled_sigma = 0.0;  ///< 2 sigma1 / eps
};

struct ThinSweep {
    std::vector<ThinRow> rows;
    double mu1_limit = 0.0;  ///< extrapolated to eps = 0
    double scaled_sigma_limit = 0.0;
    double F_limit = 0.0;
    double mu1_h = 0.0;  ///< one-dimensional values for h = hplus + hminus
    double sigma1_h = 0.0;
    double F_h = 0.0;
};

struct ThinOptions {
    std::size_t columns = 120;
    std::size_t min_layers = 4;
    unsigned threads = 1;
};

/// Eigenvalues of the thin domains for each eps (strictly decreasing, at least
/// 3 values) on structured meshes, with limits from the quadratic in eps
/// through the three smallest eps.
[[nodiscard]] ThinSweep thin_sweep(const ProfileH& hplus, const ProfileH& hminus, const std::vector<double>& eps,
                                   const ThinOptions& options = {});

/// Value at 0 of the quadratic through (x_i, y_i), i = 0,1,2.
[[nodiscard]] double extrapolate_to_zero(const double x[3], const double y[3]);

}  // namespace nsratio
