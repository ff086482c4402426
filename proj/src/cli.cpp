#include "nsratio/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nsratio/bessel.hpp"
#include "nsratio/bounds.hpp"
#include "nsratio/diagram.hpp"
#include "nsratio/errors.hpp"
#include "nsratio/fem2d.hpp"
#include "nsratio/format.hpp"
#include "nsratio/geom2d.hpp"
#include "nsratio/mesh.hpp"
#include "nsratio/parallel.hpp"
#include "nsratio/sl1d.hpp"
#include "nsratio/variations.hpp"
#include "nsratio/version.hpp"

namespace nsratio::cli {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// Numbers leave the tool with 12 significant digits in every format.
Json n(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(num(v));
}

std::string scalar_text(const Json& v) {
    if (v.is_null()) return "nan";
    if (v.is_number_float()) return num(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void print_table(const Json& rows, std::ostream& out, char sep) {
    if (rows.empty()) return;
    bool first = true;
    for (const auto& [k, _] : rows.front().items()) {
        out << (first ? "" : std::string(1, sep)) << k;
        first = false;
    }
    out << '\n';
    for (const auto& row : rows) {
        first = true;
        for (const auto& [_, v] : row.items()) {
            out << (first ? "" : std::string(1, sep)) << scalar_text(v);
            first = false;
        }
        out << '\n';
    }
}

void print_text(const Json& j, const std::string& prefix, std::ostream& out) {
    for (const auto& [key, v] : j.items()) {
        const std::string name = prefix + key;
        if (v.is_object()) {
            print_text(v, name + ".", out);
        } else if (v.is_array() && !v.empty() && v.front().is_object()) {
            out << name << ":\n";
            print_table(v, out, ' ');
        } else if (v.is_array()) {
            out << name << ':';
            for (const auto& e : v) out << ' ' << scalar_text(e);
            out << '\n';
        } else {
            out << name << ": " << scalar_text(v) << '\n';
        }
    }
}

struct Globals {
    bool json = false;
    std::uint64_t seed = 0;
    std::string out_dir;
    unsigned threads = 0;
    bool verbose = false;
};

struct Run {
    std::string command;
    Json params = Json::object();
    Json result = Json::object();
    std::string csv;  // when set and --json is off, printed instead of the text form
    int code = kExitOk;
};

std::string out_path(const Globals& g, const std::string& p) {
    fs::path path(p);
    if (path.is_relative() && !g.out_dir.empty()) path = fs::path(g.out_dir) / path;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    return path.string();
}

Json record_json(const DomainRecord& r) {
    return Json{{"h_max", n(r.h_max)},
                {"dofs", r.dofs},
                {"area", n(r.area)},
                {"perimeter", n(r.perimeter)},
                {"mu1", n(r.mu1)},
                {"sigma1", n(r.sigma1)},
                {"x", n(r.x)},
                {"y", n(r.y)},
                {"F", n(r.F)},
                {"min_angle_deg", n(r.min_angle_deg)},
                {"quality_warning", r.quality_warning},
                {"mu1_residual", n(r.mu1_residual)},
                {"sigma1_residual", n(r.sigma1_residual)}};
}

// ---- subcommands ----------------------------------------------------------

struct F1dArgs {
    std::string profile = "const";
    std::size_t elements = 2048;
    bool oracle = false;
    std::size_t nodes = 4096;
    bool no_richardson = false;
};

void run_f1d(Run& run, const F1dArgs& a) {
    run.params = {{"profile", a.profile}, {"elements", a.elements}, {"richardson", !a.no_richardson}};
    const ProfileH h = parse_profile_spec(a.profile);
    Sl1dOptions o;
    o.elements = a.elements;
    o.richardson = !a.no_richardson;
    const FResult f = F_of_h(h, o);
    const ValidityReport v = validate(h);
    run.result = {{"knots", h.size()},      {"in_class", v.valid && v.normalized},
                  {"integral", n(f.integral)}, {"mu1", n(f.mu1)},
                  {"sigma1", n(f.sigma1)},     {"F", n(f.F)},
                  {"mu1_residual", n(f.mu1_residual)}, {"sigma1_residual", n(f.sigma1_residual)}};
    if (a.oracle) {
        run.params["oracle_nodes"] = a.nodes;
        const KernelOracleResult k = sigma1_kernel_oracle(h, a.nodes);
        run.result["oracle"] = {{"sigma1_kernel", n(k.eigenvalue)},
                                {"relative_delta", n(std::abs(k.eigenvalue - f.sigma1) / f.sigma1)}};
    }
}

struct TriangleArgs {
    double x0 = 0.5;
    std::size_t elements = 2048;
};

void run_triangle(Run& run, const TriangleArgs& a) {
    run.params = {{"x0", n(a.x0)}, {"elements", a.elements}};
    const TranscendentalRoot s = sigma1_tent(a.x0), m = mu1_tent(a.x0);
    Sl1dOptions o;
    o.elements = a.elements;
    const ProfileH t = triangular(a.x0);
    const double sg = sigma1(t, o).eigenvalue, mg = mu1(t, o).eigenvalue;
    run.result = {{"sigma1", n(s.value)},
                  {"mu1", n(m.value)},
                  {"ratio", n(m.value / s.value)},
                  {"ratio_error", n(std::abs(m.value / s.value - 4.0))},
                  {"sigma1_galerkin", n(sg)},
                  {"mu1_galerkin", n(mg)},
                  {"ratio_galerkin", n(mg / sg)},
                  {"sigma1_delta", n(sg - s.value)},
                  {"mu1_delta", n(mg - m.value)},
                  {"sigma1_equation_residual", n(s.residual)},
                  {"mu1_equation_residual", n(m.residual)}};
}

struct BoundsArgs {
    std::size_t grid = 1000;
    bool csv = false;
};

void run_bounds(Run& run, const Globals& g, const BoundsArgs& a) {
    run.params = {{"grid", a.grid}};
    const KResult k = constant_K(a.grid, 1e-12, g.threads);
    const LowerBound lb = lower_bound_constant();
    const LemmaCheck lc = verify_lemma(a.grid, g.threads);
    run.result = {{"K", n(k.K)},
                  {"tau_star", n(k.tau_star)},
                  {"upper", n(2.0 * (1.0 + k.K))},
                  {"lower", n(lb.value)},
                  {"lower_delta", n(lb.delta)},
                  {"lower_branch_gap", n(lb.branch_gap)},
                  {"lemma",
                   {{"samples", lc.samples},
                    {"sign_failures", lc.sign_failures},
                    {"membership_failures", lc.membership_failures},
                    {"nonnegativity_failures", lc.nonnegativity_failures},
                    {"max_scaled_residual", n(lc.max_scaled_residual)},
                    {"ok", lc.ok()}}}};
    if (a.csv) {
        std::ostringstream os;
        os << "tau,y1,y2,y3,y4,f\n";
        for (std::size_t i = 0; i < a.grid; ++i) {
            const double tau = (static_cast<double>(i) + 0.5) / static_cast<double>(a.grid);
            const QuarticRoots q = quartic_roots(tau);
            os << num(tau);
            for (double y : q.roots) os << ',' << num(y);
            os << ',' << num(f_of_tau(tau)) << '\n';
        }
        const std::string path = out_path(g, "bounds_tau.csv");
        write_text_file(path, os.str());
        run.result["csv"] = path;
    }
    if (!lc.ok()) run.code = kExitComputation;
}

void run_geom(Run& run, const std::string& shape) {
    run.params = {{"shape", shape}};
    const ConvexPolygon p = parse_shape_spec(shape);
    const GeometryFunctionals f = functionals(p);
    run.result = {{"vertices", p.size()},
                  {"area", n(f.area)},
                  {"perimeter", n(f.perimeter)},
                  {"diameter", n(f.diameter)},
                  {"width", n(f.width)},
                  {"inradius", n(f.inradius)},
                  {"incenter", {n(f.incenter.x), n(f.incenter.y)}},
                  {"F_upper_bound", n(per_domain_upper_bound(f.width, f.diameter, f.inradius, f.perimeter))}};
}

struct FemArgs {
    std::string shape;
    double hmax = 0.05;
    int levels = 1;
    bool csv = false;
};

void run_fem(Run& run, const FemArgs& a) {
    run.params = {{"shape", a.shape}, {"hmax", n(a.hmax)}, {"levels", a.levels}};
    if (a.levels < 1 || a.levels > 6) throw InputError("fem: --levels must be in 1..6");
    const ConvexPolygon p = parse_shape_spec(a.shape);
    TriangleMesh m = mesh_polygon(p, a.hmax);
    Json rows = Json::array();
    for (int l = 0; l < a.levels; ++l) {
        if (l > 0) m = refine_uniform(m);
        DomainRecord r = evaluate_mesh(m);
        r.area = p.area();
        r.perimeter = p.perimeter();
        r.x = r.sigma1 * r.perimeter;
        r.y = r.mu1 * r.area;
        r.F = r.y / r.x;
        Json row = {{"level", l}};
        row.update(record_json(r));
        rows.push_back(row);
    }
    run.result = {{"levels", rows}};
    if (a.csv) {
        std::ostringstream os;
        print_table(rows, os, ',');
        run.csv = os.str();
    }
}

struct ThinArgs {
    std::string profile = "tent:0.5";
    std::string hminus;
    std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::size_t columns = 120;
    std::size_t min_layers = 4;
    bool csv = false;
};

void run_thin(Run& run, const Globals& g, const ThinArgs& a) {
    run.params = {{"profile", a.profile}, {"hminus", a.hminus.empty() ? "same" : a.hminus}, {"eps", Json::array()},
                  {"columns", a.columns}, {"min_layers", a.min_layers}};
    for (double e : a.eps) run.params["eps"].push_back(n(e));
    // A single profile h is split evenly, so the one-dimensional limit is h itself.
    ProfileH hp = parse_profile_spec(a.profile), hm = hp;
    if (a.hminus.empty()) {
        hp = hp.scaled(0.5);
        hm = hp;
    } else {
        hm = parse_profile_spec(a.hminus);
    }
    ThinOptions o;
    o.columns = a.columns;
    o.min_layers = a.min_layers;
    o.threads = g.threads == 0 ? 1 : g.threads;
    const ThinSweep s = thin_sweep(hp, hm, a.eps, o);
    Json rows = Json::array();
    for (const auto& r : s.rows)
        rows.push_back({{"eps", n(r.eps)},
                        {"mu1", n(r.record.mu1)},
                        {"sigma1", n(r.record.sigma1)},
                        {"scaled_sigma", n(r.scaled_sigma)},
                        {"F", n(r.record.F)},
                        {"dofs", r.record.dofs},
                        {"min_angle_deg", n(r.record.min_angle_deg)}});
    run.result = {{"rows", rows},
                  {"limit", {{"mu1", n(s.mu1_limit)}, {"scaled_sigma", n(s.scaled_sigma_limit)}, {"F", n(s.F_limit)}}},
                  {"one_dimensional", {{"mu1", n(s.mu1_h)}, {"sigma1", n(s.sigma1_h)}, {"F", n(s.F_h)}}},
                  {"relative_gap",
                   {{"mu1", n(std::abs(s.mu1_limit - s.mu1_h) / s.mu1_h)},
                    {"scaled_sigma", n(std::abs(s.scaled_sigma_limit - s.sigma1_h) / s.sigma1_h)},
                    {"F", n(std::abs(s.F_limit - s.F_h) / s.F_h)}}}};
    if (a.csv) {
        std::ostringstream os;
        print_table(rows, os, ',');
        run.csv = os.str();
    }
}

struct VariationArgs {
    bool all = false;
    double A = 1.0;
};

void run_variation(Run& run, const Globals& g, const VariationArgs& a) {
    run.params = {{"all", a.all}, {"A", n(a.A)}};
    Json rows = Json::array();
    bool ok = true;
    auto add = [&](const std::string& direction, const VariationReport& r, double tol, bool absolute = false) {
        const double err = absolute ? std::abs(r.finite_difference - r.analytic) : r.relative_error;
        const bool pass = err <= tol;
        ok = ok && pass;
        rows.push_back({{"check", r.name},
                        {"direction", direction},
                        {"analytic", n(r.analytic)},
                        {"finite_difference", n(r.finite_difference)},
                        {"error", n(err)},
                        {"order", n(r.observed_order)},
                        {"tolerance", n(tol)},
                        {"pass", pass}});
    };
    constexpr double kPi = std::numbers::pi;
    std::vector<std::pair<std::string, ProfileH>> dirs = {
        {"1", constant_profile(1.0)},
        {"x", ProfileH({0.0, 1.0}, {0.0, 1.0})},
        {"cos(2pi x)", sample_profile([&](double x) { return std::cos(2.0 * kPi * x); }, 2049)}};
    if (a.all)
        for (std::uint64_t k = 0; k < 5; ++k)
            dirs.emplace_back("concave#" + std::to_string(k), random_concave_direction(stream_seed(g.seed, k)));
    for (const auto& [name, phi] : dirs) {
        add(name, first_variation_sigma(phi), 1e-4);
        add(name, first_variation_mu(phi), 1e-4, std::abs(mu_dot(phi)) < 1e-12);
        add(name, first_variation_F(phi), 1e-4, std::abs(F_dot(phi)) < 1e-12);
    }
    if (a.all) add("0.3+0.7x", first_variation_F(ProfileH({0.0, 1.0}, {0.3, 1.0})), 1e-6, true);
    const SecondVariation sv = second_variation_F_linear(a.A);
    add("A x", sv.F, 1e-3);
    add("A x", sv.sigma, 1e-3);
    add("A x", sv.mu, 1e-3);
    const EigenfunctionResiduals er = eigenfunction_derivative_residuals(a.A);
    const bool res_ok = er.max_residual() <= 1e-10;
    ok = ok && res_ok;
    run.result = {{"checks", rows},
                  {"eigenfunction_residuals",
                   {{"v_ode", n(er.v_ode)},
                    {"v_boundary", n(er.v_boundary)},
                    {"v_orthogonality", n(er.v_orthogonality)},
                    {"u_ode", n(er.u_ode)},
                    {"u_boundary", n(er.u_boundary)},
                    {"u_normalization", n(er.u_normalization)},
                    {"u_inner_product", n(er.u_inner_product)},
                    {"u_stated_side_value", n(er.u_stated_side_value)},
                    {"max", n(er.max_residual())},
                    {"pass", res_ok}}},
                  {"all_pass", ok}};
    if (!ok) run.code = kExitComputation;
}

struct OptimizeArgs {
    std::string mode = "min";
    std::size_t knots = 21;
    std::size_t restarts = 1;
    std::size_t elements = 1024;
    std::size_t max_evaluations = 4000;
};

void run_optimize(Run& run, const Globals& g, const OptimizeArgs& a) {
    run.params = {{"mode", a.mode},         {"knots", a.knots},       {"restarts", a.restarts},
                  {"elements", a.elements}, {"max_evaluations", a.max_evaluations}};
    OptimizeOptions o;
    o.mode = a.mode == "max" ? OptimizeMode::Max : OptimizeMode::Min;
    o.knots = a.knots;
    o.restarts = a.restarts;
    o.seed = g.seed;
    o.elements = a.elements;
    o.max_evaluations = a.max_evaluations;
    o.threads = g.threads;
    const OptimizeResult r = optimize_F(o);
    std::ostringstream trace;
    trace << "run,step,F\n";
    Json runs = Json::array();
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const auto& ru = r.runs[i];
        for (std::size_t s = 0; s < ru.trace.size(); ++s) trace << i << ',' << s << ',' << num(ru.trace[s]) << '\n';
        runs.push_back({{"run", i},
                        {"start", i == 0 ? "constant" : "random"},
                        {"F", n(ru.best)},
                        {"evaluations", ru.evaluations}});
    }
    const std::string ppath = out_path(g, "optimize_h_profile.json");
    const std::string tpath = out_path(g, "optimize_h_trace.csv");
    write_text_file(ppath, to_json(r.best.profile) + "\n");
    write_text_file(tpath, trace.str());
    run.result = {{"best_F", n(r.best.best)}, {"runs", runs}, {"profile_file", ppath}, {"trace_file", tpath}};
}

struct DiagramArgs {
    std::string family = "randomPolygon";
    std::size_t n = 100;
    double hmax = 0.03;
    std::size_t hull_points = 15;
    double eps_max = 1.0;
    double eps_min = 0.01;
    std::size_t rectangles = 40;
    std::vector<std::string> named;
    std::string csv, svg, report;
};

void run_diagram(Run& run, const Globals& g, const DiagramArgs& a) {
    Campaign c;
    c.family = parse_family(a.family);
    c.count = a.n;
    c.seed = g.seed;
    c.h_max = a.hmax;
    c.hull_points = a.hull_points;
    c.eps_max = a.eps_max;
    c.eps_min = a.eps_min;
    c.companion_rectangles = a.rectangles;
    if (!a.named.empty()) c.named = a.named;
    c.threads = g.threads;
    run.params = {{"family", a.family}, {"n", a.n},         {"hmax", n(a.hmax)}, {"hull_points", a.hull_points},
                  {"eps_max", n(a.eps_max)}, {"eps_min", n(a.eps_min)}};
    const CampaignResult r = run_campaign(c);
    const ConjectureReport& rep = r.report;
    Json nearest = Json::array();
    for (std::size_t id : rep.nearest_to_one)
        for (const auto& p : r.points)
            if (p.id == id)
                nearest.push_back({{"id", id},
                                   {"label", p.label},
                                   {"F", n(p.record.F)},
                                   {"diameter", n(p.geometry.diameter)},
                                   {"width", n(p.geometry.width)},
                                   {"inradius", n(p.geometry.inradius)}});
    run.result = {{"points", rep.points},
                  {"failures", rep.failures},
                  {"quality_warnings", rep.quality_warnings},
                  {"min_F", n(rep.min_F)},
                  {"max_F", n(rep.max_F)},
                  {"outside_conjectured_band", rep.outside_band},
                  {"outside_band_ids", rep.outside_band_ids},
                  {"outside_box", rep.outside_box},
                  {"hard_violations", rep.hard_violations},
                  {"nearest_to_one", nearest}};
    if (!rep.rectangle_bins.empty()) {
        Json bins = Json::array();
        for (const auto& b : rep.rectangle_bins)
            bins.push_back({{"x_lo", n(b.x_lo)},
                            {"x_hi", n(b.x_hi)},
                            {"min_y_other", b.min_y_other ? n(*b.min_y_other) : Json()},
                            {"min_y_rectangle", b.min_y_rectangle ? n(*b.min_y_rectangle) : Json()},
                            {"rectangle_attains_min", b.rectangle_attains_min}});
        run.result["rectangle_bins"] = bins;
    }
    if (!a.csv.empty()) {
        const std::string p = out_path(g, a.csv);
        write_text_file(p, to_csv(r));
        run.result["csv"] = p;
    }
    if (!a.svg.empty()) {
        const std::string p = out_path(g, a.svg);
        SvgStyle st;
        st.title = family_name(c.family) + ", seed " + std::to_string(c.seed);
        write_text_file(p, to_svg(r.points, st));
        run.result["svg"] = p;
    }
    if (!a.report.empty()) {
        const std::string p = out_path(g, a.report);
        write_text_file(p, report_json(r) + "\n");
        run.result["report"] = p;
    }
}

void emit(const Run& run, const Globals& g, std::ostream& out) {
    if (g.json) {
        Json j = {{"nsratio", kVersion},
                  {"command", run.command},
                  {"seed", g.seed},
                  {"threads", g.threads ? g.threads : default_threads()},
                  {"params", run.params},
                  {"result", run.result}};
        out << j.dump(2) << '\n';
        return;
    }
    out << "# nsratio " << kVersion << '\n' << "# command: " << run.command << '\n' << "# seed: " << g.seed << '\n';
    out << "# threads: " << (g.threads ? g.threads : default_threads()) << '\n' << "# params:";
    for (const auto& [k, v] : run.params.items()) {
        out << ' ' << k << '=';
        if (v.is_array()) {
            for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << scalar_text(v[i]);
        } else {
            out << scalar_text(v);
        }
    }
    out << '\n';
    if (!run.csv.empty())
        out << run.csv;
    else
        print_text(run.result, "", out);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Neumann/Steklov ratio laboratory", "nsratio"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    if (const char* env = std::getenv("NSRATIO_OUT")) g.out_dir = env;
    app.add_flag("--json", g.json, "machine-readable output");
    app.add_option("--seed", g.seed, "base seed for sampled quantities");
    app.add_option("--out-dir", g.out_dir, "directory for output files (default $NSRATIO_OUT or cwd)");
    app.add_option("--threads", g.threads, "worker count for campaigns (0 = hardware)");
    app.add_flag("-v,--verbose", g.verbose, "timing on stderr");

    F1dArgs f1d;
    auto* c_f1d = app.add_subcommand("f1d", "1D eigenvalues and F(h) of a profile");
    c_f1d->add_option("--profile", f1d.profile, "const | parabolic | tent:<x0> | JSON file")->capture_default_str();
    c_f1d->add_option("--elements", f1d.elements)->capture_default_str()->check(CLI::Range(8, 1 << 22));
    c_f1d->add_flag("--oracle", f1d.oracle, "cross-check sigma1 with the Green kernel operator");
    c_f1d->add_option("--oracle-nodes", f1d.nodes)->capture_default_str()->check(CLI::Range(16, 1 << 16));
    c_f1d->add_flag("--no-richardson", f1d.no_richardson);

    TriangleArgs tri;
    auto* c_tri = app.add_subcommand("triangle-ratio", "mu1/sigma1 of a tent profile via Bessel roots and Galerkin");
    c_tri->add_option("--x0", tri.x0)->capture_default_str()->check(CLI::Range(1e-6, 1.0 - 1e-6));
    c_tri->add_option("--elements", tri.elements)->capture_default_str()->check(CLI::Range(8, 1 << 22));

    BoundsArgs bnd;
    auto* c_bnd = app.add_subcommand("bounds", "constant K, the lower constant and the quartic lemma check");
    c_bnd->add_option("--grid", bnd.grid)->capture_default_str()->check(CLI::Range(100, 10000000));
    c_bnd->add_flag("--csv", bnd.csv, "write tau, y1..y4, f(tau) to bounds_tau.csv");

    std::string geom_shape;
    auto* c_geom = app.add_subcommand("geom", "geometric functionals of a convex polygon");
    c_geom->add_option("--shape", geom_shape, "T1 | T2 | square | disk(n) | rectangle(L,l) | JSON file")->required();

    FemArgs fem;
    auto* c_fem = app.add_subcommand("fem", "P2 eigenvalues and F of a polygon");
    c_fem->add_option("--shape", fem.shape)->required();
    c_fem->add_option("--hmax", fem.hmax)->capture_default_str()->check(CLI::PositiveNumber);
    c_fem->add_option("--levels", fem.levels, "uniform refinement levels")->capture_default_str();
    c_fem->add_flag("--csv", fem.csv, "CSV rows instead of the text form");

    ThinArgs thin;
    auto* c_thin = app.add_subcommand("thin", "thin-domain sweep and extrapolated limits");
    c_thin->add_option("--profile", thin.profile, "h; split evenly above and below unless --hminus is given")
        ->capture_default_str();
    c_thin->add_option("--hminus", thin.hminus, "lower profile; --profile is then the upper one");
    c_thin->add_option("--eps", thin.eps, "decreasing list, e.g. 0.2,0.1,0.05")->delimiter(',');
    c_thin->add_option("--columns", thin.columns)->capture_default_str()->check(CLI::Range(4, 100000));
    c_thin->add_option("--min-layers", thin.min_layers)->capture_default_str()->check(CLI::Range(1, 1000));
    c_thin->add_flag("--csv", thin.csv, "CSV rows instead of the text form");

    VariationArgs var;
    auto* c_var = app.add_subcommand("variation-check", "closed-form variations against finite differences");
    c_var->add_flag("--all", var.all, "add random concave directions and the affine F check");
    c_var->add_option("--A", var.A, "slope of the linear direction")->capture_default_str();

    OptimizeArgs opt;
    auto* c_opt = app.add_subcommand("optimize-h", "local search for extreme F(h) over concave profiles");
    c_opt->add_option("--mode", opt.mode)->capture_default_str()->check(CLI::IsMember({"min", "max"}));
    c_opt->add_option("--knots", opt.knots)->capture_default_str()->check(CLI::Range(5, 1000));
    c_opt->add_option("--restarts", opt.restarts)->capture_default_str()->check(CLI::Range(1, 10000));
    c_opt->add_option("--elements", opt.elements)->capture_default_str()->check(CLI::Range(8, 1 << 20));
    c_opt->add_option("--max-evaluations", opt.max_evaluations)->capture_default_str();

    DiagramArgs dia;
    auto* c_dia = app.add_subcommand("diagram", "Blaschke-Santalo diagram campaign");
    c_dia->add_option("--family", dia.family,
                      "randomPolygon | randomTriangle | randomQuadrilateral | collapsingRectangle | "
                      "collapsingTent | named")
        ->capture_default_str();
    c_dia->add_option("--n", dia.n, "sample count")->capture_default_str()->check(CLI::Range(1, 10000000));
    c_dia->add_option("--hmax", dia.hmax)->capture_default_str()->check(CLI::PositiveNumber);
    c_dia->add_option("--hull-points", dia.hull_points)->capture_default_str();
    c_dia->add_option("--eps-max", dia.eps_max)->capture_default_str();
    c_dia->add_option("--eps-min", dia.eps_min)->capture_default_str();
    c_dia->add_option("--rectangles", dia.rectangles, "companion rectangles for quadrilateral campaigns")
        ->capture_default_str();
    c_dia->add_option("--shapes", dia.named, "shape ids for the named family")->delimiter(',');
    c_dia->add_option("--csv", dia.csv, "CSV output path");
    c_dia->add_option("--svg", dia.svg, "SVG scatter output path");
    c_dia->add_option("--report", dia.report, "JSON summary output path");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    if (g.threads > 0) set_default_threads(g.threads);
    Run run;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (c_f1d->parsed()) {
            run.command = "f1d";
            run_f1d(run, f1d);
        } else if (c_tri->parsed()) {
            run.command = "triangle-ratio";
            run_triangle(run, tri);
        } else if (c_bnd->parsed()) {
            run.command = "bounds";
            run_bounds(run, g, bnd);
        } else if (c_geom->parsed()) {
            run.command = "geom";
            run_geom(run, geom_shape);
        } else if (c_fem->parsed()) {
            run.command = "fem";
            run_fem(run, fem);
        } else if (c_thin->parsed()) {
            run.command = "thin";
            run_thin(run, g, thin);
        } else if (c_var->parsed()) {
            run.command = "variation-check";
            run_variation(run, g, var);
        } else if (c_opt->parsed()) {
            run.command = "optimize-h";
            run_optimize(run, g, opt);
        } else {
            run.command = "diagram";
            run_diagram(run, g, dia);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\nsee 'nsratio " << run.command << " --help'\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitComputation;
    }
    emit(run, g, out);
    if (g.verbose)
        err << run.command << ": "
            << num(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()) << " s\n";
    return run.code;
}

}  // namespace nsratio::cli
