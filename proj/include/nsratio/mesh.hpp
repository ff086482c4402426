#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "nsratio/geom2d.hpp"
#include "nsratio/profile.hpp"

namespace nsratio {

/// Conforming triangulation. Triangles are counterclockwise; boundary edges are
/// oriented with the domain on their left, so the outward normal points right.
struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> boundary_edges;
    double h_max = 0.0;          ///< longest edge
    double min_angle_deg = 0.0;  ///< smallest interior angle
    bool quality_warning = false;
};

inline constexpr double kMinAngleFloorDeg = 20.0;

struct MeshOptions {
    int smoothing_rounds = 3;  ///< rounds of (Laplacian smoothing, Delaunay flips)
    int smoothing_sweeps = 3;  ///< Laplacian sweeps per round
};

/// Unstructured mesh of a convex polygon with edge lengths about h_max:
/// boundary edges split at spacing <= h_max, a centroid fan, a triangular
/// lattice of interior points inserted with Lawson flips, then Laplacian
/// smoothing alternated with flips. Boundary nodes never move. Sets
/// quality_warning when the smallest angle is below kMinAngleFloorDeg.
[[nodiscard]] TriangleMesh mesh_polygon(const ConvexPolygon& p, double h_max, const MeshOptions& options = {});

/// Structured mesh of the thin domain between -eps*hminus and eps*hplus:
/// columns at the union of `columns` uniform abscissae and the profile knots,
/// the same number of layers in every column (at least min_layers, more when the
/// domain is thick so cells stay near unit aspect), each column collapsing to one
/// node where the thickness vanishes.
[[nodiscard]] TriangleMesh structured_thin_mesh(const ProfileH& hplus, const ProfileH& hminus, double eps,
                                                std::size_t columns = 120, std::size_t min_layers = 4);

/// Splits every triangle into four at edge midpoints.
[[nodiscard]] TriangleMesh refine_uniform(const TriangleMesh& m);

/// Recomputes boundary edges, h_max, min angle and the warning flag from nodes
/// and triangles.
void finalize_mesh(TriangleMesh& m);

struct MeshCheck {
    bool conforming = false;       ///< every interior edge shared by exactly two triangles
    bool positive = false;         ///< all triangles counterclockwise with positive area
    bool closed_boundary = false;  ///< boundary edges form one closed chain
    double area = 0.0;
    double min_angle_deg = 0.0;
};

[[nodiscard]] MeshCheck check_mesh(const TriangleMesh& m);

}  // namespace nsratio
