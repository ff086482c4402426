#include "nsratio/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsratio/bessel.hpp"
#include "nsratio/bounds.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/format.hpp"
#include "nsratio/parallel.hpp"
#include "nsratio/version.hpp"

namespace nsratio {

namespace {

constexpr double kPi = std::numbers::pi;

double x_limit() { return 8.0 * kPi; }
double y_limit() {
    const double j = first_zero_j1_prime();
    return kPi * j * j;
}

double eps_at(const Campaign& c, std::size_t i, std::size_t n) {
    if (n <= 1) return c.eps_max;
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    return c.eps_max * std::pow(c.eps_min / c.eps_max, t);
}

DiagramPoint evaluate_sample(const Campaign& c, Family fam, std::size_t i, std::size_t n) {
    DiagramPoint p;
    p.id = i;
    p.family = fam;
    p.seed = stream_seed(c.seed, i);
    try {
        std::optional<ConvexPolygon> poly;
        std::optional<TriangleMesh> mesh;
        const auto columns = static_cast<std::size_t>(std::max(20.0, std::ceil(1.0 / c.h_max)));
        switch (fam) {
            case Family::RandomPolygon:
                poly = random_hull(c.hull_points, p.seed);
                p.label = "hull" + std::to_string(c.hull_points);
                break;
            case Family::RandomTriangle:
                poly = random_triangle(p.seed);
                p.label = "triangle";
                break;
            case Family::RandomQuadrilateral:
                poly = random_quadrilateral(p.seed);
                p.label = "quadrilateral";
                break;
            case Family::CollapsingRectangle: {
                const double eps = eps_at(c, i, n);
                const ProfileH one = constant_profile(1.0), zero = constant_profile(0.0);
                poly = thin_domain(one, zero, eps);
                mesh = structured_thin_mesh(one, zero, eps, columns);
                p.label = "rectangle(1," + num(eps) + ")";
                break;
            }
            case Family::CollapsingTent: {
                // apex abscissa drawn from the sample seed, eps on the geometric sweep
                const double x0 = 0.05 + 0.9 * static_cast<double>(p.seed >> 11) * 0x1.0p-53;
                const double eps = eps_at(c, i, n);
                const ProfileH tent = triangular(x0), zero = constant_profile(0.0);
                poly = thin_domain(tent, zero, eps);
                mesh = structured_thin_mesh(tent, zero, eps, columns);
                p.label = "tent(" + num(x0) + "," + num(eps) + ")";
                break;
            }
            case Family::Named:
                p.label = c.named.at(i);
                poly = named_shape(p.label);
                break;
        }
        p.geometry = functionals(*poly);
        p.record = mesh ? evaluate_mesh(*mesh) : F_of_domain(*poly, c.h_max);
        // exact polygon area and perimeter for the normalized coordinates
        p.record.area = p.geometry.area;
        p.record.perimeter = p.geometry.perimeter;
        p.record.x = p.record.sigma1 * p.record.perimeter;
        p.record.y = p.record.mu1 * p.record.area;
        p.record.F = p.record.y / p.record.x;
        p.upper_bound = per_domain_upper_bound(p.geometry.width, p.geometry.diameter, p.geometry.inradius,
                                               p.geometry.perimeter);
        p.ok = true;
    } catch (const std::exception& e) {
        p.ok = false;
        p.error = e.what();
    }
    return p;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::RandomPolygon: return "randomPolygon";
        case Family::RandomTriangle: return "randomTriangle";
        case Family::RandomQuadrilateral: return "randomQuadrilateral";
        case Family::CollapsingRectangle: return "collapsingRectangle";
        case Family::CollapsingTent: return "collapsingTent";
        case Family::Named: return "named";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    for (Family f : {Family::RandomPolygon, Family::RandomTriangle, Family::RandomQuadrilateral,
                     Family::CollapsingRectangle, Family::CollapsingTent, Family::Named})
        if (family_name(f) == s) return f;
    throw InputError("unknown family '" + s +
                     "' (expected randomPolygon, randomTriangle, randomQuadrilateral, collapsingRectangle, "
                     "collapsingTent or named)");
}

CampaignResult run_campaign(const Campaign& c) {
    if (!(c.h_max > 0.0)) throw InputError("campaign: h_max must be positive");
    if (c.hull_points < 3) throw InputError("campaign: hull_points must be at least 3");
    if (!(c.eps_min > 0.0) || !(c.eps_max >= c.eps_min)) throw InputError("campaign: need 0 < eps_min <= eps_max");
    for (const auto& id : c.named) (void)named_shape(id);

    CampaignResult r;
    r.campaign = c;
    const std::size_t n = c.family == Family::Named ? c.named.size() : c.count;
    if (n == 0) throw InputError("campaign: empty sample");
    r.points.resize(n);
    parallel_for(n, [&](std::size_t i) { r.points[i] = evaluate_sample(c, c.family, i, n); }, c.threads);

    if (c.family == Family::RandomQuadrilateral && c.companion_rectangles > 0) {
        // Rectangles from the square down to aspect eps_min, for the bin comparison.
        std::vector<DiagramPoint> rect(c.companion_rectangles);
        Campaign rc = c;
        rc.seed = c.seed ^ 0xA5A5A5A5ULL;
        parallel_for(
            rect.size(),
            [&](std::size_t i) { rect[i] = evaluate_sample(rc, Family::CollapsingRectangle, i, rect.size()); },
            c.threads);
        for (auto& p : rect) {
            p.id += n;
            r.points.push_back(std::move(p));
        }
    }
    r.report = conjecture_report(r.points);
    return r;
}

ConjectureReport conjecture_report(const std::vector<DiagramPoint>& points, std::size_t bins) {
    if (points.empty()) throw InputError("conjecture_report: no points");
    ConjectureReport rep;
    rep.points = points.size();
    rep.min_F = std::numeric_limits<double>::infinity();
    rep.max_F = -std::numeric_limits<double>::infinity();
    const double lower = lower_bound_constant().value - 0.01;
    std::vector<std::pair<double, std::size_t>> byF;
    for (const auto& p : points) {
        if (!p.ok) {
            ++rep.failures;
            continue;
        }
        const double F = p.record.F;
        rep.quality_warnings += p.record.quality_warning ? 1 : 0;
        rep.min_F = std::min(rep.min_F, F);
        rep.max_F = std::max(rep.max_F, F);
        if (F < 1.0 || F > 2.0) {
            ++rep.outside_band;
            rep.outside_band_ids.push_back(p.id);
        }
        if (p.record.x > x_limit() || p.record.y > y_limit()) ++rep.outside_box;
        if (F < lower || F > 9.04 || F > p.upper_bound * (1.0 + 1e-9)) ++rep.hard_violations;
        byF.emplace_back(F, p.id);
    }
    std::sort(byF.begin(), byF.end());
    for (std::size_t k = 0; k < std::min<std::size_t>(5, byF.size()); ++k) rep.nearest_to_one.push_back(byF[k].second);

    const bool has_rect = std::any_of(points.begin(), points.end(),
                                      [](const auto& p) { return p.ok && p.family == Family::CollapsingRectangle; });
    const bool has_quad = std::any_of(points.begin(), points.end(),
                                      [](const auto& p) { return p.ok && p.family == Family::RandomQuadrilateral; });
    if (has_rect && has_quad && bins > 0) {
        double xmax = 0.0;
        for (const auto& p : points)
            if (p.ok) xmax = std::max(xmax, p.record.x);
        for (std::size_t b = 0; b < bins; ++b) {
            ConjectureReport::Bin bin;
            bin.x_lo = xmax * static_cast<double>(b) / static_cast<double>(bins);
            bin.x_hi = xmax * static_cast<double>(b + 1) / static_cast<double>(bins);
            for (const auto& p : points) {
                if (!p.ok || p.record.x < bin.x_lo || p.record.x > bin.x_hi) continue;
                auto& slot = p.family == Family::CollapsingRectangle ? bin.min_y_rectangle : bin.min_y_other;
                slot = slot ? std::min(*slot, p.record.y) : p.record.y;
            }
            bin.rectangle_attains_min =
                bin.min_y_rectangle && (!bin.min_y_other || *bin.min_y_rectangle <= *bin.min_y_other);
            rep.rectangle_bins.push_back(bin);
        }
    }
    if (byF.empty()) rep.min_F = rep.max_F = std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::string to_csv(const std::vector<DiagramPoint>& points) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& p : points) {
        const auto& g = p.geometry;
        const auto& r = p.record;
        auto v = [&](double x) { return num(p.ok ? x : nan); };
        os << p.id << ',' << family_name(p.family) << ',' << p.seed << ',' << v(g.area) << ',' << v(g.perimeter) << ','
           << v(g.diameter) << ',' << v(g.width) << ',' << v(g.inradius) << ',' << v(r.mu1) << ',' << v(r.sigma1)
           << ',' << v(r.x) << ',' << v(r.y) << ',' << v(r.F) << ',' << (p.ok ? r.dofs : 0) << ',' << v(r.h_max)
           << '\n';
    }
    return os.str();
}

std::string to_csv(const CampaignResult& res) {
    const auto& c = res.campaign;
    const auto& rep = res.report;
    std::ostringstream os;
    auto ids = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
        return s.empty() ? std::string("none") : s;
    };
    os << "# nsratio " << kVersion << " diagram campaign\n";
    os << "# family=" << family_name(c.family) << " count=" << res.points.size() << " seed=" << c.seed
       << " h_max=" << num(c.h_max) << '\n';
    os << "# random law: uniform points in the unit square [0,1]^2; hull of " << c.hull_points
       << " points (randomPolygon), 3 (randomTriangle), 4 extreme points (randomQuadrilateral); per-sample seed = "
          "stream_seed(seed, id)\n";
    os << "# collapsing families: eps geometric from " << num(c.eps_max) << " to " << num(c.eps_min)
       << ", structured meshes; axes x = sigma1*P in [0, 8pi], y = mu1*|Omega| in [0, pi*j'11^2]\n";
    os << "# outside_conjectured_band(1<=F<=2): " << ids(rep.outside_band_ids) << '\n';
    std::vector<std::size_t> warn, failed;
    for (const auto& p : res.points) {
        if (!p.ok) failed.push_back(p.id);
        else if (p.record.quality_warning) warn.push_back(p.id);
    }
    os << "# mesh_quality_warning(min angle < 20 deg): " << ids(warn) << '\n';
    os << "# failed: " << ids(failed) << '\n';
    for (const auto& p : res.points)
        if (!p.ok) os << "# error " << p.id << ": " << p.error << '\n';
    os << to_csv(res.points);
    return os.str();
}

std::string to_svg(const std::vector<DiagramPoint>& points, const SvgStyle& s) {
    const double X = x_limit(), Y = y_limit();
    const double ml = 56, mr = 16, mt = s.title.empty() ? 16 : 36, mb = 44;
    const double pw = s.width - ml - mr, ph = s.height - mt - mb;
    auto sx = [&](double x) { return ml + pw * x / X; };
    auto sy = [&](double y) { return mt + ph * (1.0 - y / Y); };
    auto color = [](Family f) {
        switch (f) {
            case Family::RandomPolygon: return "#1f77b4";
            case Family::RandomTriangle: return "#2ca02c";
            case Family::RandomQuadrilateral: return "#9467bd";
            case Family::CollapsingRectangle: return "#d62728";
            case Family::CollapsingTent: return "#ff7f0e";
            case Family::Named: return "#000000";
        }
        return "#777777";
    };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << s.width << "\" height=\"" << s.height
       << "\" viewBox=\"0 0 " << s.width << ' ' << s.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"" << s.width << "\" height=\"" << s.height << "\" fill=\"white\"/>\n";
    if (!s.title.empty()) os << "<text x=\"" << ml << "\" y=\"22\" font-size=\"14\">" << s.title << "</text>\n";
    os << "<rect id=\"frame\" x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"black\" data-xmax=\"" << num(X) << "\" data-ymax=\"" << num(Y)
       << "\"/>\n";
    for (int k = 0; k <= 8; ++k) {
        const double x = X * k / 8.0;
        os << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(mt + ph + 16) << "\" text-anchor=\"middle\">"
           << (k == 0 ? std::string("0") : std::to_string(k) + "π") << "</text>\n";
    }
    for (int k = 0; k <= 5; ++k) {
        const double y = Y * k / 5.0;
        os << "<text x=\"" << num(ml - 6) << "\" y=\"" << num(sy(y) + 4) << "\" text-anchor=\"end\">" << num(std::round(y * 100) / 100)
           << "</text>\n";
    }
    os << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(s.height - 8.0) << "\" text-anchor=\"middle\">x = σ₁P</text>\n";
    os << "<text x=\"14\" y=\"" << num(mt + ph / 2) << "\" transform=\"rotate(-90 14 " << num(mt + ph / 2)
       << ")\" text-anchor=\"middle\">y = μ₁|Ω|</text>\n";
    if (s.reference_lines)
        for (int slope : {1, 2}) {
            // clip y = slope * x to the frame
            const double x2 = std::min(X, Y / slope), y2 = slope * x2;
            os << "<line id=\"ref-F" << slope << "\" x1=\"" << num(sx(0)) << "\" y1=\"" << num(sy(0)) << "\" x2=\""
               << num(sx(x2)) << "\" y2=\"" << num(sy(y2)) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\" data-x1=\"0\" data-y1=\"0\" data-x2=\""
               << num(x2) << "\" data-y2=\"" << num(y2) << "\" data-slope=\"" << slope << "\"/>\n";
        }
    for (const auto& p : points) {
        if (!p.ok) continue;
        os << "<circle cx=\"" << num(sx(p.record.x)) << "\" cy=\"" << num(sy(p.record.y)) << "\" r=\""
           << num(s.point_radius) << "\" fill=\"" << color(p.family) << "\" data-id=\"" << p.id << "\" data-F=\""
           << num(p.record.F) << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string report_json(const CampaignResult& res) {
    const auto& rep = res.report;
    nlohmann::json j;
    j["family"] = family_name(res.campaign.family);
    j["seed"] = res.campaign.seed;
    j["h_max"] = res.campaign.h_max;
    j["points"] = rep.points;
    j["failures"] = rep.failures;
    j["quality_warnings"] = rep.quality_warnings;
    j["min_F"] = rep.min_F;
    j["max_F"] = rep.max_F;
    j["outside_conjectured_band"] = rep.outside_band;
    j["outside_band_ids"] = rep.outside_band_ids;
    j["outside_box"] = rep.outside_box;
    j["hard_violations"] = rep.hard_violations;
    nlohmann::json nearest = nlohmann::json::array();
    for (std::size_t id : rep.nearest_to_one)
        for (const auto& p : res.points)
            if (p.id == id)
                nearest.push_back({{"id", id},
                                   {"family", family_name(p.family)},
                                   {"label", p.label},
                                   {"F", p.record.F},
                                   {"area", p.geometry.area},
                                   {"perimeter", p.geometry.perimeter},
                                   {"diameter", p.geometry.diameter},
                                   {"width", p.geometry.width},
                                   {"inradius", p.geometry.inradius}});
    j["nearest_to_one"] = nearest;
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : rep.rectangle_bins)
        bins.push_back({{"x_lo", b.x_lo},
                        {"x_hi", b.x_hi},
                        {"min_y_other", b.min_y_other ? nlohmann::json(*b.min_y_other) : nlohmann::json()},
                        {"min_y_rectangle", b.min_y_rectangle ? nlohmann::json(*b.min_y_rectangle) : nlohmann::json()},
                        {"rectangle_attains_min", b.rectangle_attains_min}});
    j["rectangle_bins"] = bins;
    return j.dump(2);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw ComputationError("write to '" + path + "' failed");
}

}  // namespace nsratio
