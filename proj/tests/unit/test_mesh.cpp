#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/mesh.hpp"

using namespace nsratio;

namespace {
void require_valid(const TriangleMesh& m, double area) {
    const auto c = check_mesh(m);
    REQUIRE(c.conforming);
    REQUIRE(c.positive);
    REQUIRE(c.closed_boundary);
    REQUIRE(c.area == doctest::Approx(area).epsilon(1e-12));
}
}  // namespace

TEST_CASE("square at h 0.1 passes all mesh invariants") {
    const auto m = mesh_polygon(named_shape("square"), 0.1);
    require_valid(m, 1.0);
    CHECK(m.min_angle_deg >= kMinAngleFloorDeg);
    CHECK_FALSE(m.quality_warning);
    CHECK(m.h_max < 0.16);
    CHECK(m.boundary_edges.size() == 40);
    for (const auto& e : m.boundary_edges) {
        // outward normal (right of the edge) points away from the center
        const Vec2 a = m.nodes[static_cast<std::size_t>(e[0])], b = m.nodes[static_cast<std::size_t>(e[1])];
        const Vec2 n{b.y - a.y, a.x - b.x};
        CHECK(dot(n, 0.5 * (a + b) - Vec2{0.5, 0.5}) > 0.0);
    }
}

TEST_CASE("uniform refinement halves h and quadruples triangles") {
    const auto m = mesh_polygon(named_shape("T1"), 0.1);
    const auto r = refine_uniform(m);
    require_valid(r, std::sqrt(3.0) / 4.0);
    CHECK(r.triangles.size() == 4 * m.triangles.size());
    CHECK(r.h_max == doctest::Approx(0.5 * m.h_max).epsilon(1e-12));
    CHECK(r.boundary_edges.size() == 2 * m.boundary_edges.size());
    CHECK(r.min_angle_deg == doctest::Approx(m.min_angle_deg).epsilon(1e-9));
}

TEST_CASE("named shapes mesh with good quality") {
    for (const char* id : {"T1", "T2", "disk(256)", "rectangle(2,0.5)"}) {
        const auto p = named_shape(id);
        const auto m = mesh_polygon(p, 0.05);
        require_valid(m, p.area());
        CHECK_MESSAGE(m.min_angle_deg >= kMinAngleFloorDeg, id);
    }
}

TEST_CASE("property: random hulls mesh validly") {
    std::size_t warnings = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto p = random_hull(15, stream_seed(11, s));
        const auto m = mesh_polygon(p, 0.03 + 0.05 * static_cast<double>(s % 3));
        require_valid(m, p.area());
        warnings += m.quality_warning ? 1 : 0;
        REQUIRE(m.min_angle_deg > 5.0);
    }
    CHECK(warnings <= 10);
}

TEST_CASE("structured thin meshes") {
    const auto tent = triangular(0.5);
    const auto m = structured_thin_mesh(tent, tent, 0.05, 40);
    require_valid(m, 0.05);
    // cells thin out towards the collapsed tips, so only consistency of the flag is required
    CHECK(m.quality_warning == (m.min_angle_deg < kMinAngleFloorDeg));

    const auto rect = structured_thin_mesh(constant_profile(1.0), constant_profile(0.0), 0.2, 60);
    require_valid(rect, 0.2);
    CHECK(rect.min_angle_deg > 40.0);

    gen::Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const auto hp = gen::random_concave(rng);
        const auto hm = gen::random_concave(rng).scaled(gen::uniform(rng, 0.0, 1.0));
        const double eps = gen::uniform(rng, 0.02, 0.3);
        require_valid(structured_thin_mesh(hp, hm, eps, 50), eps * (hp.integral() + hm.integral()));
    }
    CHECK_THROWS_AS((void)structured_thin_mesh(tent, tent, 0.0), InputError);
}

TEST_CASE("mesh input errors") {
    CHECK_THROWS_AS((void)mesh_polygon(named_shape("square"), 0.0), InputError);
    CHECK_THROWS_AS((void)mesh_polygon(named_shape("square"), 1e-6), InputError);
}
