#include "nsratio/geom2d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsratio/errors.hpp"

namespace nsratio {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

namespace {

double signed_area2(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += cross(v[i], v[(i + 1) % v.size()]);
    return s;
}

// Drops repeated points and vertices that are collinear with their neighbours.
std::vector<Vec2> simplify(std::vector<Vec2> v) {
    double scale = 0.0;
    for (const Vec2& p : v) scale = std::max({scale, std::abs(p.x), std::abs(p.y)});
    const double dup_tol = 1e-14 * std::max(scale, 1e-300);
    bool changed = true;
    while (changed && v.size() >= 3) {
        changed = false;
        for (std::size_t i = 0; i < v.size() && v.size() >= 3; ++i) {
            const Vec2 a = v[(i + v.size() - 1) % v.size()], b = v[i], c = v[(i + 1) % v.size()];
            const double lab = norm(b - a), lbc = norm(c - b);
            if (lab <= dup_tol || std::abs(cross(b - a, c - b)) <= 1e-12 * lab * lbc) {
                v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
                --i;
            }
        }
    }
    return v;
}

std::vector<Vec2> clip(const std::vector<Vec2>& poly, Vec2 n, double c) {
    // keep n.x <= c
    std::vector<Vec2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2 p = poly[i], q = poly[(i + 1) % m];
        const double dp = dot(n, p) - c, dq = dot(n, q) - c;
        if (dp <= 0.0) out.push_back(p);
        if ((dp < 0.0 && dq > 0.0) || (dp > 0.0 && dq < 0.0)) {
            const double t = dp / (dp - dq);
            out.push_back(p + t * (q - p));
        }
    }
    return out;
}

double uniform01(std::uint64_t& state) { return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53; }

}  // namespace

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) {
    for (const Vec2& p : vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InputError("polygon: non-finite vertex");
    if (vertices.size() < 3) throw InputError("polygon: at least 3 vertices are required");
    if (signed_area2(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
    v_ = simplify(std::move(vertices));
    if (v_.size() < 3) throw InputError("polygon: degenerate (fewer than 3 non-collinear vertices)");
    for (std::size_t i = 0; i < v_.size(); ++i)
        if (!(orient(vertex(i), vertex(i + 1), vertex(i + 2)) > 0.0))
            throw InputError("polygon: vertices do not form a strictly convex counterclockwise chain");
    // a convex turn at every vertex with total turning 2 pi
    double turning = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
        const Vec2 e0 = vertex(i + 1) - vertex(i), e1 = vertex(i + 2) - vertex(i + 1);
        turning += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    if (std::abs(turning - 2.0 * std::numbers::pi) > 1e-6)
        throw InputError("polygon: vertex chain winds more than once");
}

double ConvexPolygon::area() const { return 0.5 * signed_area2(v_); }

double ConvexPolygon::perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += norm(vertex(i + 1) - vertex(i));
    return s;
}

Vec2 ConvexPolygon::centroid() const {
    // area centroid, relative to the first vertex for accuracy
    const Vec2 o = v_[0];
    double a = 0.0, cx = 0.0, cy = 0.0;
    for (std::size_t i = 1; i + 1 < v_.size(); ++i) {
        const Vec2 p = v_[i] - o, q = v_[i + 1] - o;
        const double w = cross(p, q);
        a += w;
        cx += w * (p.x + q.x);
        cy += w * (p.y + q.y);
    }
    return {o.x + cx / (3.0 * a), o.y + cy / (3.0 * a)};
}

bool ConvexPolygon::contains(Vec2 p, double tol) const {
    for (std::size_t i = 0; i < v_.size(); ++i) {
        const Vec2 a = vertex(i), b = vertex(i + 1);
        if (cross(b - a, p - a) < -tol * norm(b - a)) return false;
    }
    return true;
}

namespace {

template <class Visit>
void antipodal_sweep(const ConvexPolygon& p, Visit&& visit) {
    const std::size_t n = p.size();
    std::size_t j = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p.vertex(i), b = p.vertex(i + 1);
        const Vec2 e = b - a;
        while (cross(e, p.vertex(j + 1) - a) > cross(e, p.vertex(j) - a)) j = (j + 1) % n;
        visit(i, j);
    }
}

}  // namespace

double diameter(const ConvexPolygon& p) {
    double d = 0.0;
    antipodal_sweep(p, [&](std::size_t i, std::size_t j) {
        for (std::size_t a : {i, i + 1})
            for (std::size_t b : {j, j + 1}) d = std::max(d, norm(p.vertex(a) - p.vertex(b)));
    });
    return d;
}

double minimal_width(const ConvexPolygon& p) {
    double w = std::numeric_limits<double>::infinity();
    antipodal_sweep(p, [&](std::size_t i, std::size_t j) {
        const Vec2 a = p.vertex(i), e = p.vertex(i + 1) - a;
        w = std::min(w, cross(e, p.vertex(j) - a) / norm(e));
    });
    return w;
}

Incircle inscribed_circle(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    std::vector<Vec2> normals(n);
    std::vector<double> offsets(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = p.vertex(i), e = p.vertex(i + 1) - a;
        const double len = norm(e);
        normals[i] = {e.y / len, -e.x / len};  // outward for counterclockwise order
        offsets[i] = dot(normals[i], a);
    }
    auto inner_body = [&](double r) {
        std::vector<Vec2> body = p.vertices();
        for (std::size_t i = 0; i < n && !body.empty(); ++i) body = clip(body, normals[i], offsets[i] - r);
        return body;
    };
    double lo = 0.0, hi = 0.5 * minimal_width(p) * (1.0 + 1e-12);
    std::vector<Vec2> best = p.vertices();
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto body = inner_body(mid);
        if (body.empty()) {
            hi = mid;
        } else {
            lo = mid;
            best = std::move(body);
        }
    }
    Vec2 c{0.0, 0.0};
    for (const Vec2& q : best) c = c + q;
    c = (1.0 / static_cast<double>(best.size())) * c;
    return {c, lo};
}

GeometryFunctionals functionals(const ConvexPolygon& p) {
    GeometryFunctionals g;
    g.area = p.area();
    g.perimeter = p.perimeter();
    g.diameter = diameter(p);
    g.width = minimal_width(p);
    const Incircle ic = inscribed_circle(p);
    g.inradius = ic.radius;
    g.incenter = ic.center;
    if (!(g.area > 0.0 && g.inradius > 0.0)) throw InputError("functionals: degenerate polygon");
    return g;
}

ConvexPolygon convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) throw InputError("convex_hull: fewer than 3 distinct points");
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    if (h.size() < 3) throw InputError("convex_hull: points are collinear");
    return ConvexPolygon(std::move(h));
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (0xD1B54A32D192ED03ULL * (index + 1));
    (void)splitmix64(s);
    return splitmix64(s);
}

ConvexPolygon random_hull(std::size_t count, std::uint64_t seed, std::size_t min_vertices) {
    if (count < 3) throw InputError("random_hull: at least 3 points are required");
    if (min_vertices < 3 || min_vertices > count) throw InputError("random_hull: bad vertex requirement");
    std::uint64_t state = seed;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Vec2> pts(count);
        for (Vec2& p : pts) {
            p.x = uniform01(state);
            p.y = uniform01(state);
        }
        try {
            ConvexPolygon h = convex_hull(std::move(pts));
            if (h.size() >= min_vertices) return h;
        } catch (const InputError&) {
            // degenerate draw, resample
        }
    }
    throw ComputationError("random_hull: retry cap reached");
}

ConvexPolygon random_triangle(std::uint64_t seed) { return random_hull(3, seed, 3); }
ConvexPolygon random_quadrilateral(std::uint64_t seed) { return random_hull(4, seed, 4); }

ConvexPolygon thin_domain(const ProfileH& hplus, const ProfileH& hminus, double eps) {
    if (!(eps > 0.0)) throw InputError("thin_domain: epsilon must be positive");
    for (const ProfileH* h : {&hplus, &hminus})
        if (!validate(*h).valid) throw InputError("thin_domain: profiles must be nonnegative and concave");
    std::vector<double> x;
    std::merge(hplus.knots().begin(), hplus.knots().end(), hminus.knots().begin(), hminus.knots().end(),
               std::back_inserter(x));
    x.erase(std::unique(x.begin(), x.end()), x.end());
    std::vector<Vec2> v;
    for (double xi : x) v.push_back({xi, -eps * hminus(xi)});
    for (auto it = x.rbegin(); it != x.rend(); ++it) v.push_back({*it, eps * hplus(*it)});
    return ConvexPolygon(std::move(v));
}

ConvexPolygon regular_polygon(std::size_t n, double circumradius) {
    if (n < 3) throw InputError("regular_polygon: n must be at least 3");
    std::vector<Vec2> v(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        v[k] = {circumradius * std::cos(t), circumradius * std::sin(t)};
    }
    return ConvexPolygon(std::move(v));
}

ConvexPolygon rectangle(double length, double height) {
    if (!(length > 0.0 && height > 0.0)) throw InputError("rectangle: sides must be positive");
    return ConvexPolygon({{0.0, 0.0}, {length, 0.0}, {length, height}, {0.0, height}});
}

ConvexPolygon named_shape(const std::string& id) {
    if (id == "T1") return ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.5, std::sqrt(3.0) / 2.0}});
    if (id == "T2") return ConvexPolygon({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
    if (id == "square") return rectangle(1.0, 1.0);
    if (id == "disk") return regular_polygon(256);
    std::smatch m;
    static const std::regex disk_re(R"(disk\((\d+)\))");
    static const std::regex rect_re(R"(rectangle\(([^,()]+),([^,()]+)\))");
    try {
        if (std::regex_match(id, m, disk_re)) return regular_polygon(std::stoul(m[1].str()));
        if (std::regex_match(id, m, rect_re)) return rectangle(std::stod(m[1].str()), std::stod(m[2].str()));
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const InputError*>(&e)) throw;
        throw InputError("shape: cannot parse '" + id + "'");
    }
    throw InputError("shape: unknown id '" + id + "' (expected T1, T2, square, disk(n), rectangle(L,l))");
}

std::string polygon_to_json(const ConvexPolygon& p) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (const Vec2& v : p.vertices()) j["vertices"].push_back({v.x, v.y});
    return j.dump();
}

ConvexPolygon polygon_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("polygon: invalid JSON: ") + e.what());
    }
    if (!j.contains("vertices") || !j["vertices"].is_array()) throw InputError("polygon: JSON needs 'vertices'");
    std::vector<Vec2> v;
    for (const auto& p : j["vertices"]) {
        if (!p.is_array() || p.size() != 2) throw InputError("polygon: each vertex must be [x, y]");
        v.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return ConvexPolygon(std::move(v));
}

ConvexPolygon parse_shape_spec(const std::string& spec) {
    std::ifstream in(spec);
    if (in) {
        std::stringstream ss;
        ss << in.rdbuf();
        return polygon_from_json(ss.str());
    }
    return named_shape(spec);
}

ConvexPolygon transformed(const ConvexPolygon& p, double angle, double scale, Vec2 shift) {
    const double c = std::cos(angle), s = std::sin(angle);
    std::vector<Vec2> v;
    for (const Vec2& q : p.vertices()) v.push_back({scale * (c * q.x - s * q.y) + shift.x, scale * (s * q.x + c * q.y) + shift.y});
    return ConvexPolygon(std::move(v));
}

}  // namespace nsratio
