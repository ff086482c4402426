#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nsratio/bessel.hpp"
#include "nsratio/bounds.hpp"
#include "nsratio/cli.hpp"
#include "nsratio/diagram.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/fem2d.hpp"
#include "nsratio/geom2d.hpp"
#include "nsratio/profile.hpp"
#include "nsratio/sl1d.hpp"
#include "nsratio/variations.hpp"
#include "nsratio/version.hpp"

namespace py = pybind11;
using namespace nsratio;

namespace {

py::dict record_dict(const DomainRecord& r) {
    py::dict d;
    d["area"] = r.area;
    d["perimeter"] = r.perimeter;
    d["mu1"] = r.mu1;
    d["sigma1"] = r.sigma1;
    d["x"] = r.x;
    d["y"] = r.y;
    d["F"] = r.F;
    d["dofs"] = r.dofs;
    d["h_max"] = r.h_max;
    d["min_angle_deg"] = r.min_angle_deg;
    d["quality_warning"] = r.quality_warning;
    d["mu1_residual"] = r.mu1_residual;
    d["sigma1_residual"] = r.sigma1_residual;
    return d;
}

py::dict geometry_dict(const GeometryFunctionals& g) {
    py::dict d;
    d["area"] = g.area;
    d["perimeter"] = g.perimeter;
    d["diameter"] = g.diameter;
    d["width"] = g.width;
    d["inradius"] = g.inradius;
    d["incenter"] = py::make_tuple(g.incenter.x, g.incenter.y);
    return d;
}

py::dict variation_dict(const VariationReport& r) {
    py::dict d;
    d["name"] = r.name;
    d["analytic"] = r.analytic;
    d["finite_difference"] = r.finite_difference;
    d["steps"] = r.steps;
    d["by_step"] = r.by_step;
    d["relative_error"] = r.relative_error;
    d["observed_order"] = r.observed_order;
    return d;
}

Sl1dOptions sl1d_options(std::size_t elements, bool richardson) {
    Sl1dOptions o;
    o.elements = elements;
    o.richardson = richardson;
    return o;
}

ConvexPolygon polygon_from(const std::vector<std::pair<double, double>>& pts) {
    std::vector<Vec2> v;
    for (const auto& [x, y] : pts) v.push_back({x, y});
    return ConvexPolygon(std::move(v));
}

std::vector<std::pair<double, double>> polygon_points(const ConvexPolygon& p) {
    std::vector<std::pair<double, double>> out;
    for (const Vec2& v : p.vertices()) out.emplace_back(v.x, v.y);
    return out;
}

}  // namespace

PYBIND11_MODULE(_nsratio, m) {
    m.doc() = "Neumann and Steklov eigenvalue ratio on convex domains and thin-domain limits";
    m.attr("__version__") = kVersion;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ComputationError>(m, "ComputationError", PyExc_RuntimeError);

    py::class_<ProfileH>(m, "Profile")
        .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("knots"), py::arg("values"))
        .def_property_readonly("knots", &ProfileH::knots)
        .def_property_readonly("values", &ProfileH::values)
        .def("__call__", [](const ProfileH& h, double x) { return h(x); })
        .def("__len__", &ProfileH::size)
        .def("integral", py::overload_cast<>(&ProfileH::integral, py::const_))
        .def("scaled", &ProfileH::scaled)
        .def("to_json", [](const ProfileH& h) { return to_json(h); })
        .def("__repr__", [](const ProfileH& h) { return "<Profile with " + std::to_string(h.size()) + " knots>"; });

    m.def("constant_profile", &constant_profile, py::arg("c") = 1.0);
    m.def("triangular", &triangular, py::arg("x0"), "tent with peak 1 at x0");
    m.def("parabolic_star", &parabolic_star, py::arg("samples") = 2001);
    m.def("normalize", &normalize);
    m.def("parse_profile", &parse_profile_spec, py::arg("spec"));
    m.def("project_concave", [](std::vector<double> k, std::vector<double> v) { return project_concave(k, v); });
    m.def("validate", [](const ProfileH& h) {
        const ValidityReport r = validate(h);
        py::dict d;
        d["valid"] = r.valid;
        d["normalized"] = r.normalized;
        d["integral"] = r.integral;
        d["violations"] = r.violations.size();
        return d;
    });

    m.def(
        "mu1", [](const ProfileH& h, std::size_t e, bool r) { return mu1(h, sl1d_options(e, r)).eigenvalue; },
        py::arg("h"), py::arg("elements") = 2048, py::arg("richardson") = true);
    m.def(
        "sigma1", [](const ProfileH& h, std::size_t e, bool r) { return sigma1(h, sl1d_options(e, r)).eigenvalue; },
        py::arg("h"), py::arg("elements") = 2048, py::arg("richardson") = true);
    m.def(
        "F_of_h",
        [](const ProfileH& h, std::size_t e) {
            const FResult f = F_of_h(h, sl1d_options(e, true));
            py::dict d;
            d["F"] = f.F;
            d["mu1"] = f.mu1;
            d["sigma1"] = f.sigma1;
            d["integral"] = f.integral;
            return d;
        },
        py::arg("h"), py::arg("elements") = 2048);
    m.def(
        "sigma1_kernel_oracle", [](const ProfileH& h, std::size_t n) { return sigma1_kernel_oracle(h, n).eigenvalue; },
        py::arg("h"), py::arg("nodes") = 4096);

    m.def("first_zero_j0", &first_zero_j0);
    m.def("first_zero_j1_prime", &first_zero_j1_prime);
    m.def("sigma1_tent", [](double x0) { return sigma1_tent(x0).value; }, py::arg("x0"));
    m.def("mu1_tent", [](double x0) { return mu1_tent(x0).value; }, py::arg("x0"));

    m.def(
        "constant_K",
        [](std::size_t grid) {
            const KResult k = constant_K(grid);
            return py::make_tuple(k.K, k.tau_star);
        },
        py::arg("grid") = 1000, "(K, tau_star)");
    m.def("lower_bound_constant", [] { return lower_bound_constant().value; });
    m.def("per_domain_upper_bound", &per_domain_upper_bound, py::arg("width"), py::arg("diameter"),
          py::arg("inradius"), py::arg("perimeter"));
    m.def("verify_lemma", [](std::size_t grid) { return verify_lemma(grid).ok(); }, py::arg("grid") = 1000);

    py::class_<ConvexPolygon>(m, "Polygon")
        .def(py::init(&polygon_from), py::arg("vertices"))
        .def_property_readonly("vertices", &polygon_points)
        .def("area", &ConvexPolygon::area)
        .def("perimeter", &ConvexPolygon::perimeter)
        .def("__len__", &ConvexPolygon::size);
    m.def("named_shape", &named_shape, py::arg("id"));
    m.def("random_hull", &random_hull, py::arg("count") = 15, py::arg("seed") = 0, py::arg("min_vertices") = 3);
    m.def("thin_domain", &thin_domain, py::arg("hplus"), py::arg("hminus"), py::arg("eps"));
    m.def("functionals", [](const ConvexPolygon& p) { return geometry_dict(functionals(p)); });

    m.def(
        "F_of_domain", [](const ConvexPolygon& p, double h) { return record_dict(F_of_domain(p, h)); }, py::arg("polygon"),
        py::arg("h_max") = 0.05);
    m.def(
        "thin_sweep",
        [](const ProfileH& hp, const ProfileH& hm, const std::vector<double>& eps, std::size_t columns) {
            ThinOptions o;
            o.columns = columns;
            const ThinSweep s = thin_sweep(hp, hm, eps, o);
            py::list rows;
            for (const auto& r : s.rows) {
                py::dict d = record_dict(r.record);
                d["eps"] = r.eps;
                d["scaled_sigma"] = r.scaled_sigma;
                rows.append(d);
            }
            py::dict d;
            d["rows"] = rows;
            d["mu1_limit"] = s.mu1_limit;
            d["scaled_sigma_limit"] = s.scaled_sigma_limit;
            d["F_limit"] = s.F_limit;
            d["mu1_h"] = s.mu1_h;
            d["sigma1_h"] = s.sigma1_h;
            d["F_h"] = s.F_h;
            return d;
        },
        py::arg("hplus"), py::arg("hminus"), py::arg("eps"), py::arg("columns") = 120);

    m.def("sigma_dot", &sigma_dot);
    m.def("mu_dot", &mu_dot);
    m.def("F_dot", &F_dot);
    m.def("first_variation_sigma", [](const ProfileH& phi) { return variation_dict(first_variation_sigma(phi)); });
    m.def("first_variation_mu", [](const ProfileH& phi) { return variation_dict(first_variation_mu(phi)); });
    m.def("first_variation_F", [](const ProfileH& phi) { return variation_dict(first_variation_F(phi)); });
    m.def(
        "second_variation_F_linear", [](double A) { return variation_dict(second_variation_F_linear(A).F); },
        py::arg("A") = 1.0);
    m.def(
        "optimize_F",
        [](const std::string& mode, std::size_t knots, std::size_t restarts, std::uint64_t seed,
           std::size_t max_evaluations) {
            OptimizeOptions o;
            if (mode != "min" && mode != "max") throw InputError("optimize_F: mode must be 'min' or 'max'");
            o.mode = mode == "max" ? OptimizeMode::Max : OptimizeMode::Min;
            o.knots = knots;
            o.restarts = restarts;
            o.seed = seed;
            o.max_evaluations = max_evaluations;
            const OptimizeResult r = optimize_F(o);
            return py::make_tuple(r.best.best, r.best.profile, r.best.trace);
        },
        py::arg("mode") = "min", py::arg("knots") = 21, py::arg("restarts") = 1, py::arg("seed") = 0,
        py::arg("max_evaluations") = 4000, "(best F, profile, trace)");

    m.def(
        "run_campaign",
        [](const std::string& family, std::size_t n, std::uint64_t seed, double h_max, unsigned threads) {
            Campaign c;
            c.family = parse_family(family);
            c.count = n;
            c.seed = seed;
            c.h_max = h_max;
            c.threads = threads;
            CampaignResult r;
            {
                py::gil_scoped_release release;
                r = run_campaign(c);
            }
            py::list pts;
            for (const auto& p : r.points) {
                py::dict d = record_dict(p.record);
                d["id"] = p.id;
                d["family"] = family_name(p.family);
                d["seed"] = p.seed;
                d["label"] = p.label;
                d["ok"] = p.ok;
                d["error"] = p.error;
                d["upper_bound"] = p.upper_bound;
                d["geometry"] = geometry_dict(p.geometry);
                pts.append(d);
            }
            py::dict d;
            d["points"] = pts;
            d["csv"] = to_csv(r);
            d["svg"] = to_svg(r.points);
            d["report"] = report_json(r);
            d["hard_violations"] = r.report.hard_violations;
            d["outside_box"] = r.report.outside_box;
            d["outside_band"] = r.report.outside_band;
            return d;
        },
        py::arg("family") = "randomPolygon", py::arg("n") = 100, py::arg("seed") = 0, py::arg("h_max") = 0.03,
        py::arg("threads") = 0);

    m.def(
        "cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::dispatch(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "(exit code, stdout, stderr)");
}
