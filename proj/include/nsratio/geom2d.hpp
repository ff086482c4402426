#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsratio/profile.hpp"

namespace nsratio {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);

/// Twice the signed area of (a, b, c); positive for a left turn.
inline double orient(Vec2 a, Vec2 b, Vec2 c) { return cross(b - a, c - a); }

/// Convex polygon with counterclockwise vertices and no collinear triples.
/// The constructor accepts either orientation, drops repeated and collinear
/// vertices, and throws InputError if the result is not a strictly convex
/// polygon with at least 3 vertices.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    [[nodiscard]] const std::vector<Vec2>& vertices() const noexcept { return v_; }
    [[nodiscard]] std::size_t size() const noexcept { return v_.size(); }
    [[nodiscard]] Vec2 vertex(std::size_t i) const { return v_[i % v_.size()]; }

    [[nodiscard]] double area() const;
    [[nodiscard]] double perimeter() const;
    [[nodiscard]] Vec2 centroid() const;
    /// True when p is inside or on the boundary (within tol).
    [[nodiscard]] bool contains(Vec2 p, double tol = 1e-12) const;

private:
    std::vector<Vec2> v_;
};

struct GeometryFunctionals {
    double area = 0.0;
    double perimeter = 0.0;
    double diameter = 0.0;
    double width = 0.0;
    double inradius = 0.0;
    Vec2 incenter;
};

[[nodiscard]] double diameter(const ConvexPolygon& p);
[[nodiscard]] double minimal_width(const ConvexPolygon& p);

struct Incircle {
    Vec2 center;
    double radius = 0.0;
};

/// Largest inscribed disk (Chebyshev center of the edge half-planes), found by
/// bisection on the radius: the inner parallel body of distance r is
/// nonempty exactly when r <= inradius.
[[nodiscard]] Incircle inscribed_circle(const ConvexPolygon& p);

[[nodiscard]] GeometryFunctionals functionals(const ConvexPolygon& p);

/// Monotone-chain hull. Throws InputError if fewer than 3 non-collinear points.
[[nodiscard]] ConvexPolygon convex_hull(std::vector<Vec2> points);

/// SplitMix64 step; used to derive independent per-sample seeds.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t& state);
[[nodiscard]] std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

/// Convex hull of `count` uniform points in the unit square, resampled (up to
/// 1000 times) until the hull has at least `min_vertices` vertices.
[[nodiscard]] ConvexPolygon random_hull(std::size_t count = 15, std::uint64_t seed = 0, std::size_t min_vertices = 3);
[[nodiscard]] ConvexPolygon random_triangle(std::uint64_t seed);
/// Hull of 4 uniform points, resampled until all 4 are extreme.
[[nodiscard]] ConvexPolygon random_quadrilateral(std::uint64_t seed);

/// Region between -eps*hminus and eps*hplus over [0,1]. Abscissae are the union
/// of both knot sets; the chains are exact for piecewise-linear profiles. Throws
/// InputError if eps <= 0 or the region is not convex.
[[nodiscard]] ConvexPolygon thin_domain(const ProfileH& hplus, const ProfileH& hminus, double eps);

/// T1 (equilateral, side 1), T2 ((0,0),(1,0),(0,1)), square (unit), disk(n)
/// (regular n-gon, circumradius 1), rectangle(L,l). Throws InputError otherwise.
[[nodiscard]] ConvexPolygon named_shape(const std::string& id);
[[nodiscard]] ConvexPolygon regular_polygon(std::size_t n, double circumradius = 1.0);
[[nodiscard]] ConvexPolygon rectangle(double length, double height);

/// JSON {"vertices": [[x,y], ...]}.
[[nodiscard]] std::string polygon_to_json(const ConvexPolygon& p);
[[nodiscard]] ConvexPolygon polygon_from_json(const std::string& text);
/// Named shape id, or a path to a polygon JSON file.
[[nodiscard]] ConvexPolygon parse_shape_spec(const std::string& spec);

/// Rotation by `angle` about the origin, then scaling, then translation.
[[nodiscard]] ConvexPolygon transformed(const ConvexPolygon& p, double angle, double scale, Vec2 shift);

}  // namespace nsratio
