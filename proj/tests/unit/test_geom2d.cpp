#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "generators.hpp"
#include "nsratio/bounds.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/geom2d.hpp"

using namespace nsratio;

namespace {
constexpr double kPi = std::numbers::pi;

double brute_diameter(const ConvexPolygon& p) {
    double d = 0.0;
    for (const Vec2& a : p.vertices())
        for (const Vec2& b : p.vertices()) d = std::max(d, norm(a - b));
    return d;
}

// Width of a convex polygon is attained with one side flush to an edge.
double brute_width(const ConvexPolygon& p) {
    double w = 1e300;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Vec2 a = p.vertex(i), e = p.vertex(i + 1) - a;
        const double len = norm(e);
        double far = 0.0;
        for (const Vec2& v : p.vertices()) far = std::max(far, std::abs(cross(e, v - a)) / len);
        w = std::min(w, far);
    }
    return w;
}
}  // namespace

TEST_CASE("unit square functionals") {
    const auto g = functionals(named_shape("square"));
    CHECK(g.area == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.perimeter == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(g.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(g.width == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.inradius == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("equilateral triangle functionals") {
    const auto g = functionals(named_shape("T1"));
    CHECK(g.area == doctest::Approx(std::sqrt(3.0) / 4.0).epsilon(1e-14));
    CHECK(g.perimeter == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(g.diameter == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g.width == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-14));
    CHECK(g.inradius == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-10));
    CHECK(g.incenter.x == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("right triangle and rectangle") {
    const auto t2 = named_shape("T2");
    REQUIRE(t2.size() == 3);
    CHECK(t2.area() == doctest::Approx(0.5));
    CHECK(functionals(t2).inradius == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-10));
    const auto r = named_shape("rectangle(1,0.05)");
    const auto g = functionals(r);
    CHECK(g.area == doctest::Approx(0.05));
    CHECK(g.width == doctest::Approx(0.05));
    CHECK(g.inradius == doctest::Approx(0.025).epsilon(1e-10));
}

TEST_CASE("regular 256-gon approximates the unit disk") {
    const auto g = functionals(named_shape("disk(256)"));
    CHECK(std::abs(g.area - kPi) < 1e-3);
    CHECK(std::abs(g.perimeter - 2.0 * kPi) < 1e-3);
    CHECK(g.diameter == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.inradius == doctest::Approx(std::cos(kPi / 256.0)).epsilon(1e-9));
    CHECK(named_shape("disk").size() == 256);
}

TEST_CASE("named shapes reject unknown ids") {
    CHECK_THROWS_AS((void)named_shape("hexagon"), InputError);
    CHECK_THROWS_AS((void)named_shape("disk(2)"), InputError);
    CHECK_THROWS_AS((void)named_shape("rectangle(1,-1)"), InputError);
}

TEST_CASE("polygon constructor normalizes and rejects") {
    ConvexPolygon cw({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(cw.area() == doctest::Approx(1.0));
    ConvexPolygon col({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 1}});
    CHECK(col.size() == 4);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}}), InputError);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {2, 0}, {1, 0.2}, {2, 2}, {0, 2}}), InputError);
    CHECK_THROWS_AS(ConvexPolygon({{0, 0}, {1, 0}}), InputError);
}

TEST_CASE("hull of square corners and interior points is the square") {
    std::vector<Vec2> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}, {0.2, 0.7}, {0.5, 0.0}};
    const auto h = convex_hull(pts);
    CHECK(h.size() == 4);
    CHECK(h.area() == doctest::Approx(1.0));
}

TEST_CASE("random hull is deterministic per seed") {
    const auto a = random_hull(15, 42), b = random_hull(15, 42), c = random_hull(15, 43);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.vertex(i).x == b.vertex(i).x);
        CHECK(a.vertex(i).y == b.vertex(i).y);
    }
    CHECK(a.area() != c.area());
    CHECK(random_quadrilateral(7).size() == 4);
    CHECK(random_triangle(7).size() == 3);
}

TEST_CASE("property: calipers agree with brute force, invariants hold") {
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto p = random_hull(3 + s % 18, stream_seed(99, s));
        REQUIRE(p.size() >= 3);
        REQUIRE(p.size() <= 20);
        for (std::size_t i = 0; i < p.size(); ++i)
            REQUIRE(orient(p.vertex(i), p.vertex(i + 1), p.vertex(i + 2)) > 0.0);
        const auto g = functionals(p);
        REQUIRE(g.diameter == doctest::Approx(brute_diameter(p)).epsilon(1e-12));
        REQUIRE(g.width == doctest::Approx(brute_width(p)).epsilon(1e-12));
        REQUIRE(g.width <= g.diameter * (1 + 1e-12));
        REQUIRE(2.0 * g.inradius <= g.width * (1 + 1e-9));
        REQUIRE(g.perimeter <= kPi * g.diameter * (1 + 1e-12));
        REQUIRE(g.area <= 0.5 * g.perimeter * g.diameter);

        int tight = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const Vec2 a = p.vertex(i), e = p.vertex(i + 1) - a;
            const double dist = cross(e, g.incenter - a) / norm(e);
            REQUIRE(dist >= g.inradius - 1e-9);
            if (dist < g.inradius + 1e-7) ++tight;
        }
        REQUIRE(tight >= 2);
    }
}

TEST_CASE("property: the width-diameter-inradius quartic constraint") {
    std::size_t above_y2 = 0, n = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        const auto g = functionals(random_hull(15, stream_seed(5, s)));
        const double tau = g.width / g.diameter, y = 2.0 * g.inradius / g.diameter;
        const auto q = quartic_roots(tau);
        const double scale = 0.25 * tau * std::pow(y, 4) + 2 * std::pow(y, 3) + 5 * tau * y * y + 4 * tau * tau * y +
                             tau * tau * tau;
        REQUIRE(quartic(tau, y) >= -1e-9 * scale);
        const bool outside = y >= q.roots[1] - 1e-9 || y <= q.roots[0] + 1e-9;
        REQUIRE(outside);
        above_y2 += y >= q.roots[1] - 1e-9 ? 1 : 0;
        REQUIRE(y >= 2.0 * tau / 3.0 - 1e-12);
        ++n;
    }
    CHECK(above_y2 == n);
}

TEST_CASE("thin domains: rhombus and rectangle") {
    const auto half = triangular(0.5).scaled(0.5);
    const auto rh = thin_domain(half, half, 0.1);
    CHECK(rh.size() == 4);
    CHECK(rh.area() == doctest::Approx(0.05).epsilon(1e-12));
    const auto rect = thin_domain(constant_profile(1.0), constant_profile(0.0), 0.05);
    CHECK(rect.size() == 4);
    const auto g = functionals(rect);
    CHECK(g.area == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(g.width == doctest::Approx(0.05).epsilon(1e-12));
    CHECK_THROWS_AS((void)thin_domain(half, half, 0.0), InputError);
}

TEST_CASE("property: thin domain area equals eps times integral") {
    gen::Rng rng(17);
    for (int k = 0; k < 200; ++k) {
        const auto hp = gen::random_concave(rng);
        const auto hm = gen::random_concave(rng).scaled(gen::uniform(rng, 0.0, 1.0));
        const double eps = gen::uniform(rng, 0.01, 0.5);
        const auto p = thin_domain(hp, hm, eps);
        REQUIRE(p.area() == doctest::Approx(eps * (hp.integral() + hm.integral())).epsilon(1e-12));
    }
}

TEST_CASE("json round trip and transforms") {
    const auto p = random_hull(15, 3);
    const auto q = polygon_from_json(polygon_to_json(p));
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(q.vertex(i).x == p.vertex(i).x);
    CHECK_THROWS_AS((void)polygon_from_json("{\"v\": 1}"), InputError);
    CHECK_THROWS_AS((void)polygon_from_json("not json"), InputError);

    const std::string path = "geom_roundtrip_test.json";
    {
        std::ofstream f(path);
        f << polygon_to_json(p);
    }
    CHECK(parse_shape_spec(path).size() == p.size());
    std::remove(path.c_str());

    const auto t = transformed(p, 0.7, 2.5, {3.0, -1.0});
    const auto a = functionals(p), b = functionals(t);
    CHECK(b.area == doctest::Approx(a.area * 6.25).epsilon(1e-12));
    CHECK(b.diameter == doctest::Approx(a.diameter * 2.5).epsilon(1e-12));
    CHECK(b.width == doctest::Approx(a.width * 2.5).epsilon(1e-12));
    CHECK(b.inradius == doctest::Approx(a.inradius * 2.5).epsilon(1e-9));
}
