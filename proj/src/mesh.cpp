#include "nsratio/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "nsratio/errors.hpp"

namespace nsratio {

namespace {

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Positive when d lies strictly inside the circumcircle of counterclockwise (a,b,c).
double incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const Vec2 ad = a - d, bd = b - d, cd = c - d;
    const double a2 = dot(ad, ad), b2 = dot(bd, bd), c2 = dot(cd, cd);
    return ad.x * (bd.y * c2 - b2 * cd.y) - ad.y * (bd.x * c2 - b2 * cd.x) + a2 * (bd.x * cd.y - bd.y * cd.x);
}

// Mutable triangulation with adjacency: nb[t][i] is the triangle across the
// edge opposite corner i, or -1 on the boundary.
struct Tri {
    std::vector<Vec2>& pts;
    std::vector<std::array<int, 3>> v;
    std::vector<std::array<int, 3>> nb;
    int last = 0;
    double h = 1.0;

    explicit Tri(std::vector<Vec2>& p) : pts(p) {}

    static int at(const std::array<int, 3>& a, int x) {
        for (int i = 0; i < 3; ++i)
            if (a[static_cast<std::size_t>(i)] == x) return i;
        return -1;
    }
    Vec2 P(int t, int i) const { return pts[static_cast<std::size_t>(v[static_cast<std::size_t>(t)][static_cast<std::size_t>(i % 3)])]; }
    int& N(int t, int i) { return nb[static_cast<std::size_t>(t)][static_cast<std::size_t>(i % 3)]; }
    int V(int t, int i) const { return v[static_cast<std::size_t>(t)][static_cast<std::size_t>(i % 3)]; }

    void relink(int t, int from, int to) {
        if (t < 0) return;
        for (int i = 0; i < 3; ++i)
            if (N(t, i) == from) N(t, i) = to;
    }

    bool should_flip(int t, int i) {
        const int u = N(t, i);
        if (u < 0) return false;
        const int j = at(nb[static_cast<std::size_t>(u)], t);
        const Vec2 d = P(u, j);
        const double s = h * h * h * h;
        return incircle(P(t, 0), P(t, 1), P(t, 2), d) > 1e-10 * s;
    }

    bool convex_quad(int t, int i) {
        const int u = N(t, i);
        const int j = at(nb[static_cast<std::size_t>(u)], t);
        const Vec2 a = P(t, i), b = P(t, i + 1), c = P(t, i + 2), d = P(u, j);
        const double s = 1e-12 * h * h;
        return orient(a, b, d) > s && orient(a, d, c) > s;
    }

    // Flips the edge opposite corner i of t. Afterwards t = (a,b,d) and u = (a,d,c),
    // both with a at corner 0.
    void flip(int t, int i) {
        const int a = V(t, i), b = V(t, i + 1), c = V(t, i + 2);
        const int u = N(t, i);
        const int j = at(nb[static_cast<std::size_t>(u)], t);
        const int d = V(u, j);
        const int nu_bd = N(u, j + 1), nu_dc = N(u, j + 2);
        const int nt_ab = N(t, i + 2), nt_ca = N(t, i + 1);
        v[static_cast<std::size_t>(t)] = {a, b, d};
        nb[static_cast<std::size_t>(t)] = {nu_bd, u, nt_ab};
        v[static_cast<std::size_t>(u)] = {a, d, c};
        nb[static_cast<std::size_t>(u)] = {nu_dc, nt_ca, t};
        relink(nu_bd, u, t);
        relink(nt_ca, t, u);
    }

    void legalize(std::vector<std::pair<int, int>>& stack) {
        while (!stack.empty()) {
            const auto [t, p] = stack.back();
            stack.pop_back();
            const int i = at(v[static_cast<std::size_t>(t)], p);
            if (i < 0 || !should_flip(t, i)) continue;
            const int u = N(t, i);
            flip(t, i);
            stack.emplace_back(t, p);
            stack.emplace_back(u, p);
        }
    }

    bool inside(int t, Vec2 q) const {
        for (int i = 0; i < 3; ++i)
            if (orient(P(t, i + 1), P(t, i + 2), q) < -1e-13 * h * h) return false;
        return true;
    }

    // Returns the triangle containing q, walking from the last hit.
    int locate(Vec2 q) {
        int t = last;
        for (std::size_t steps = 0; steps < v.size() + 16 && t >= 0; ++steps) {
            int next = -1;
            bool moved = false;
            for (int i = 0; i < 3 && !moved; ++i)
                if (orient(P(t, i + 1), P(t, i + 2), q) < -1e-13 * h * h) {
                    next = N(t, i);
                    moved = true;
                }
            if (!moved) return last = t;
            t = next;
        }
        for (int s = 0; s < static_cast<int>(v.size()); ++s)
            if (inside(s, q)) return last = s;
        return -1;
    }

    void insert(int p) {
        const Vec2 q = pts[static_cast<std::size_t>(p)];
        const int t = locate(q);
        if (t < 0) return;
        int on_edge = -1;
        for (int i = 0; i < 3; ++i) {
            const Vec2 e0 = P(t, i + 1), e1 = P(t, i + 2);
            if (std::abs(orient(e0, e1, q)) <= 1e-9 * h * norm(e1 - e0)) on_edge = i;
        }
        std::vector<std::pair<int, int>> stack;
        if (on_edge >= 0 && N(t, on_edge) >= 0) {
            split_edge(t, on_edge, p, stack);
        } else if (on_edge >= 0) {
            return;  // on the polygon boundary: never inserted
        } else {
            split_face(t, p, stack);
        }
        legalize(stack);
    }

    void split_face(int t, int p, std::vector<std::pair<int, int>>& stack) {
        const int a = V(t, 0), b = V(t, 1), c = V(t, 2);
        const int na = N(t, 0), nbb = N(t, 1), nc = N(t, 2);
        const int t0 = t, t1 = static_cast<int>(v.size()), t2 = t1 + 1;
        v[static_cast<std::size_t>(t0)] = {a, b, p};
        nb[static_cast<std::size_t>(t0)] = {t1, t2, nc};
        v.push_back({b, c, p});
        nb.push_back({t2, t0, na});
        v.push_back({c, a, p});
        nb.push_back({t0, t1, nbb});
        relink(na, t, t1);
        relink(nbb, t, t2);
        stack.insert(stack.end(), {{t0, p}, {t1, p}, {t2, p}});
    }

    void split_edge(int t, int i, int p, std::vector<std::pair<int, int>>& stack) {
        const int a = V(t, i), b = V(t, i + 1), c = V(t, i + 2);
        const int u = N(t, i);
        const int j = at(nb[static_cast<std::size_t>(u)], t);
        const int d = V(u, j);
        const int nt_b = N(t, i + 1), nt_c = N(t, i + 2);
        const int nu_c = N(u, j + 1), nu_b = N(u, j + 2);
        const int t0 = t, u0 = u, t1 = static_cast<int>(v.size()), u1 = t1 + 1;
        v[static_cast<std::size_t>(t0)] = {a, b, p};
        nb[static_cast<std::size_t>(t0)] = {u1, t1, nt_c};
        v[static_cast<std::size_t>(u0)] = {d, c, p};
        nb[static_cast<std::size_t>(u0)] = {t1, u1, nu_b};
        v.push_back({a, p, c});
        nb.push_back({u0, nt_b, t0});
        v.push_back({d, p, b});
        nb.push_back({t0, nu_c, u0});
        relink(nt_b, t, t1);
        relink(nu_c, u, u1);
        stack.insert(stack.end(), {{t0, p}, {t1, p}, {u0, p}, {u1, p}});
    }

    // Lawson sweeps over all interior edges; returns the number of flips.
    std::size_t flip_pass() {
        std::size_t total = 0;
        for (int sweep = 0; sweep < 50; ++sweep) {
            std::size_t flips = 0;
            for (int t = 0; t < static_cast<int>(v.size()); ++t)
                for (int i = 0; i < 3; ++i)
                    if (N(t, i) >= 0 && should_flip(t, i) && convex_quad(t, i)) {
                        flip(t, i);
                        ++flips;
                        break;
                    }
            total += flips;
            if (flips == 0) break;
        }
        return total;
    }
};

double min_angle_of(Vec2 a, Vec2 b, Vec2 c) {
    auto ang = [](Vec2 p, Vec2 q, Vec2 r) {
        const Vec2 u = q - p, w = r - p;
        return std::atan2(std::abs(cross(u, w)), dot(u, w));
    };
    return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)}) * 180.0 / std::numbers::pi;
}

void laplacian_smooth(std::vector<Vec2>& pts, const std::vector<std::array<int, 3>>& tris, std::size_t fixed,
                      int sweeps) {
    const std::size_t n = pts.size();
    std::vector<std::vector<int>> nbrs(n), incident(n);
    for (std::size_t t = 0; t < tris.size(); ++t)
        for (int i = 0; i < 3; ++i) {
            const int a = tris[t][static_cast<std::size_t>(i)];
            incident[static_cast<std::size_t>(a)].push_back(static_cast<int>(t));
            for (int k = 1; k < 3; ++k) nbrs[static_cast<std::size_t>(a)].push_back(tris[t][static_cast<std::size_t>((i + k) % 3)]);
        }
    for (auto& l : nbrs) {
        std::sort(l.begin(), l.end());
        l.erase(std::unique(l.begin(), l.end()), l.end());
    }
    for (int s = 0; s < sweeps; ++s)
        for (std::size_t p = fixed; p < n; ++p) {
            if (nbrs[p].empty()) continue;
            Vec2 avg{};
            for (int q : nbrs[p]) avg = avg + pts[static_cast<std::size_t>(q)];
            avg = (1.0 / static_cast<double>(nbrs[p].size())) * avg;
            const Vec2 old = pts[p];
            pts[p] = avg;
            bool ok = true;
            for (int t : incident[p]) {
                const auto& tr = tris[static_cast<std::size_t>(t)];
                if (orient(pts[static_cast<std::size_t>(tr[0])], pts[static_cast<std::size_t>(tr[1])],
                           pts[static_cast<std::size_t>(tr[2])]) <= 0.0) {
                    ok = false;
                    break;
                }
            }
            if (!ok) pts[p] = old;
        }
}

}  // namespace

void finalize_mesh(TriangleMesh& m) {
    std::unordered_map<std::uint64_t, int> count;
    count.reserve(m.triangles.size() * 3);
    for (const auto& t : m.triangles)
        for (int i = 0; i < 3; ++i) ++count[edge_key(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])];
    m.boundary_edges.clear();
    m.h_max = 0.0;
    m.min_angle_deg = 180.0;
    for (const auto& t : m.triangles) {
        const Vec2 a = m.nodes[static_cast<std::size_t>(t[0])], b = m.nodes[static_cast<std::size_t>(t[1])],
                   c = m.nodes[static_cast<std::size_t>(t[2])];
        m.h_max = std::max({m.h_max, norm(b - a), norm(c - b), norm(a - c)});
        m.min_angle_deg = std::min(m.min_angle_deg, min_angle_of(a, b, c));
        for (int i = 0; i < 3; ++i) {
            const int p = t[static_cast<std::size_t>(i)], q = t[static_cast<std::size_t>((i + 1) % 3)];
            if (count[edge_key(p, q)] == 1) m.boundary_edges.push_back({p, q});
        }
    }
    m.quality_warning = m.min_angle_deg < kMinAngleFloorDeg;
}

TriangleMesh mesh_polygon(const ConvexPolygon& poly, double h_max, const MeshOptions& options) {
    if (!(h_max > 0.0) || !std::isfinite(h_max)) throw InputError("mesh: h_max must be positive");
    const auto g_area = poly.area();
    if (g_area / (h_max * h_max) > 2e7) throw InputError("mesh: h_max too small for this polygon");

    std::vector<Vec2> pts;
    const std::size_t nv = poly.size();
    for (std::size_t e = 0; e < nv; ++e) {
        const Vec2 a = poly.vertex(e), b = poly.vertex(e + 1);
        const auto k = static_cast<int>(std::max(1.0, std::ceil(norm(b - a) / h_max - 1e-9)));
        for (int s = 0; s < k; ++s) pts.push_back(a + (static_cast<double>(s) / k) * (b - a));
    }
    const std::size_t nb = pts.size();
    const Vec2 c = poly.centroid();
    pts.push_back(c);

    Tri tri(pts);
    tri.h = h_max;
    const int nbi = static_cast<int>(nb);
    for (int k = 0; k < nbi; ++k) {
        tri.v.push_back({k, (k + 1) % nbi, nbi});
        // across edge (k+1, c): next fan triangle; across (c, k): previous; across (k, k+1): boundary
        tri.nb.push_back({(k + 1) % nbi, (k + nbi - 1) % nbi, -1});
    }

    // Triangular lattice anchored at the centroid and aligned with the longest
    // edge, so the mesh moves with the polygon under rigid motions and dilations.
    // Lattice points closer than h/2 to the boundary are dropped.
    std::size_t longest = 0;
    for (std::size_t e = 1; e < nv; ++e)
        if (norm(poly.vertex(e + 1) - poly.vertex(e)) > norm(poly.vertex(longest + 1) - poly.vertex(longest)))
            longest = e;
    const Vec2 dir = poly.vertex(longest + 1) - poly.vertex(longest);
    const Vec2 u = (1.0 / norm(dir)) * dir, w{-u.y, u.x};
    const double dy = h_max * std::sqrt(3.0) / 2.0;
    double amin = 0.0, amax = 0.0, bmin = 0.0, bmax = 0.0;
    for (const Vec2& v : poly.vertices()) {
        amin = std::min(amin, dot(v - c, u));
        amax = std::max(amax, dot(v - c, u));
        bmin = std::min(bmin, dot(v - c, w));
        bmax = std::max(bmax, dot(v - c, w));
    }
    const int jlo = static_cast<int>(std::floor(bmin / dy)), jhi = static_cast<int>(std::ceil(bmax / dy));
    for (int j = jlo; j <= jhi; ++j) {
        const double shift = (j & 1) ? 0.5 * h_max : 0.0;
        const int ilo = static_cast<int>(std::floor((amin - shift) / h_max)) - 1;
        const int ihi = static_cast<int>(std::ceil((amax - shift) / h_max)) + 1;
        for (int i = ilo; i <= ihi; ++i) {
            if (i == 0 && j == 0) continue;
            const Vec2 q = c + (shift + i * h_max) * u + (j * dy) * w;
            bool keep = true;
            for (std::size_t e = 0; e < nv && keep; ++e) {
                const Vec2 a = poly.vertex(e), b = poly.vertex(e + 1);
                keep = cross(b - a, q - a) / norm(b - a) >= 0.5 * h_max;
            }
            if (!keep) continue;
            pts.push_back(q);
            tri.insert(static_cast<int>(pts.size()) - 1);
        }
    }
    tri.flip_pass();

    for (int r = 0; r < options.smoothing_rounds; ++r) {
        laplacian_smooth(pts, tri.v, nb, options.smoothing_sweeps);
        tri.flip_pass();
    }

    TriangleMesh m;
    m.nodes = std::move(pts);
    m.triangles = std::move(tri.v);
    finalize_mesh(m);
    return m;
}

TriangleMesh structured_thin_mesh(const ProfileH& hplus, const ProfileH& hminus, double eps, std::size_t columns,
                                  std::size_t min_layers) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("structured_thin_mesh: eps must be positive");
    if (columns < 2 || min_layers < 1) throw InputError("structured_thin_mesh: need >= 2 columns and >= 1 layer");
    std::vector<double> xs;
    for (std::size_t i = 0; i <= columns; ++i) xs.push_back(static_cast<double>(i) / static_cast<double>(columns));
    xs.insert(xs.end(), hplus.knots().begin(), hplus.knots().end());
    xs.insert(xs.end(), hminus.knots().begin(), hminus.knots().end());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a < 1e-12; }), xs.end());

    double tmax = 0.0;
    for (double x : xs) tmax = std::max(tmax, eps * (hplus(x) + hminus(x)));
    if (!(tmax > 0.0)) throw InputError("structured_thin_mesh: zero thickness");
    const auto layers = std::max(min_layers, static_cast<std::size_t>(std::ceil(tmax * static_cast<double>(columns))));

    TriangleMesh m;
    std::vector<std::vector<int>> col(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double top = eps * hplus(xs[k]), bot = -eps * hminus(xs[k]);
        if (top - bot <= 1e-14 * tmax) {
            col[k].push_back(static_cast<int>(m.nodes.size()));
            m.nodes.push_back({xs[k], 0.5 * (top + bot)});
            continue;
        }
        for (std::size_t j = 0; j <= layers; ++j) {
            col[k].push_back(static_cast<int>(m.nodes.size()));
            m.nodes.push_back({xs[k], bot + (top - bot) * static_cast<double>(j) / static_cast<double>(layers)});
        }
    }
    for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
        const auto& L = col[k];
        const auto& R = col[k + 1];
        if (L.size() == 1 && R.size() == 1) throw InputError("structured_thin_mesh: zero thickness on an interval");
        for (std::size_t j = 0; j < layers; ++j) {
            if (L.size() == 1) {
                m.triangles.push_back({L[0], R[j], R[j + 1]});
            } else if (R.size() == 1) {
                m.triangles.push_back({L[j], R[0], L[j + 1]});
            } else {
                m.triangles.push_back({L[j], R[j], R[j + 1]});
                m.triangles.push_back({L[j], R[j + 1], L[j + 1]});
            }
        }
    }
    finalize_mesh(m);
    return m;
}

TriangleMesh refine_uniform(const TriangleMesh& in) {
    TriangleMesh m;
    m.nodes = in.nodes;
    std::unordered_map<std::uint64_t, int> mid;
    mid.reserve(in.triangles.size() * 2);
    auto midpoint = [&](int a, int b) {
        const auto key = edge_key(a, b);
        const auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        const int id = static_cast<int>(m.nodes.size());
        m.nodes.push_back(0.5 * (in.nodes[static_cast<std::size_t>(a)] + in.nodes[static_cast<std::size_t>(b)]));
        mid.emplace(key, id);
        return id;
    };
    m.triangles.reserve(in.triangles.size() * 4);
    for (const auto& t : in.triangles) {
        const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
        m.triangles.push_back({t[0], ab, ca});
        m.triangles.push_back({ab, t[1], bc});
        m.triangles.push_back({ca, bc, t[2]});
        m.triangles.push_back({ab, bc, ca});
    }
    finalize_mesh(m);
    return m;
}

MeshCheck check_mesh(const TriangleMesh& m) {
    MeshCheck r;
    r.positive = true;
    std::unordered_map<std::uint64_t, int> directed;
    const auto n = static_cast<int>(m.nodes.size());
    auto dkey = [](int a, int b) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
    };
    r.min_angle_deg = 180.0;
    for (const auto& t : m.triangles) {
        for (int i : t)
            if (i < 0 || i >= n) return r;
        const Vec2 a = m.nodes[static_cast<std::size_t>(t[0])], b = m.nodes[static_cast<std::size_t>(t[1])],
                   c = m.nodes[static_cast<std::size_t>(t[2])];
        const double o = orient(a, b, c);
        if (!(o > 0.0)) r.positive = false;
        r.area += 0.5 * o;
        r.min_angle_deg = std::min(r.min_angle_deg, min_angle_of(a, b, c));
        for (int i = 0; i < 3; ++i) ++directed[dkey(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>((i + 1) % 3)])];
    }
    r.conforming = true;
    std::unordered_map<int, int> next;
    std::size_t boundary = 0;
    for (const auto& [k, cnt] : directed) {
        const int a = static_cast<int>(k >> 32), b = static_cast<int>(k & 0xffffffffu);
        if (cnt != 1) r.conforming = false;
        if (directed.find(dkey(b, a)) == directed.end()) {
            ++boundary;
            if (next.count(a)) r.conforming = false;
            next[a] = b;
        }
    }
    if (boundary > 0 && next.size() == boundary) {
        int start = next.begin()->first, cur = start;
        std::size_t steps = 0;
        do {
            const auto it = next.find(cur);
            if (it == next.end()) break;
            cur = it->second;
            ++steps;
        } while (cur != start && steps <= boundary);
        r.closed_boundary = cur == start && steps == boundary;
    }
    return r;
}

}  // namespace nsratio
