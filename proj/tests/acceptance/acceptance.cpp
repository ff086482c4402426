// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "generators.hpp"
#include "nsratio/bessel.hpp"
#include "nsratio/bounds.hpp"
#include "nsratio/diagram.hpp"
#include "nsratio/fem2d.hpp"
#include "nsratio/format.hpp"
#include "nsratio/geom2d.hpp"
#include "nsratio/profile.hpp"
#include "nsratio/sl1d.hpp"
#include "nsratio/variations.hpp"

using namespace nsratio;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;
// reference Bessel zeros, independent of the library's root finder
constexpr double kJ01 = 2.4048255576957727686;
constexpr double kJp11 = 1.8411837813406593;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
        }
    }
    void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome c1() {
    Outcome o;
    const double s = sigma1(parabolic_star()).eigenvalue;
    const double m1 = mu1(constant_profile()).eigenvalue, s1 = sigma1(constant_profile()).eigenvalue;
    o.require(std::abs(s - 12.0) <= 1e-4, "sigma1(6x(1-x)) = 12");
    o.require(std::abs(m1 - kPi2) <= 1e-8, "mu1(1) = pi^2");
    o.require(std::abs(s1 - kPi2) <= 1e-8, "sigma1(1) = pi^2");
    o.note("sigma1* - 12 = " + num(s - 12.0) + ", mu1(1) - pi^2 = " + num(m1 - kPi2) + ", sigma1(1) - pi^2 = " +
           num(s1 - kPi2));
    return o;
}

Outcome c2() {
    Outcome o;
    double worst_b = 0.0, worst_g = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double x0 = 0.1 * k;
        const double rb = mu1_tent(x0).value / sigma1_tent(x0).value;
        const ProfileH t = triangular(x0);
        const double rg = mu1(t).eigenvalue / sigma1(t).eigenvalue;
        worst_b = std::max(worst_b, std::abs(rb - 4.0));
        worst_g = std::max(worst_g, std::abs(rg - 4.0));
    }
    const double m = mu1_tent(0.5).value;
    o.require(worst_b <= 1e-10, "Bessel ratio within 1e-10");
    o.require(worst_g <= 1e-4, "Galerkin ratio within 1e-4");
    o.require(std::abs(m - 4.0 * kJ01 * kJ01) <= 1e-8, "mu1(T_1/2) = 4 j01^2");
    o.note("max |ratio-4| Bessel " + num(worst_b) + ", Galerkin " + num(worst_g) + ", mu1(T_1/2) - 4j01^2 = " +
           num(m - 4.0 * kJ01 * kJ01));
    return o;
}

Outcome c3() {
    Outcome o;
    gen::Rng rng(20240613);
    const double lo = kPi2 / 12.0 - 1e-3, hi = 4.0 + 1e-3;
    double fmin = 1e300, fmax = -1e300;
    std::size_t bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double F = F_of_h(gen::random_concave(rng)).F;
        fmin = std::min(fmin, F);
        fmax = std::max(fmax, F);
        if (!(F >= lo && F <= hi)) ++bad;
    }
    double tent = 0.0;
    for (double x0 : {0.1, 0.3, 0.5, 0.7, 0.9}) tent = std::max(tent, std::abs(F_of_h(triangular(x0)).F - 2.0));
    o.require(bad == 0, "pi^2/12 <= F(h) <= 4 on 1000 random profiles");
    o.require(tent <= 1e-4, "tent F = 2");
    o.note("F range [" + num(fmin) + ", " + num(fmax) + "], max |F(tent)-2| = " + num(tent));
    return o;
}

Outcome c4() {
    Outcome o;
    const KResult k = constant_K(1000);
    const LemmaCheck lc = verify_lemma(1000);
    const LowerBound lb = lower_bound_constant();
    const double expect = kPi2 / (6.0 * std::cbrt(18.0));
    const double d = std::cbrt(18.0);
    const double gap = std::abs(kPi2 / (6.0 * d) - d * d * kPi2 / 108.0);
    o.require(2.0 * (1.0 + k.K) <= 9.04, "2(1+K) <= 9.04");
    o.require(lc.ok() && lc.samples == 1000, "bracket sign conditions on 1000 tau");
    o.require(std::abs(lb.value - expect) <= 1e-12, "lower constant");
    o.require(std::abs(lb.delta - d) <= 1e-12 && lb.branch_gap <= 1e-12 && gap <= 1e-12, "branch matching at cbrt 18");
    o.note("K = " + num(k.K) + ", 2(1+K) = " + num(2.0 * (1.0 + k.K)) + ", lower = " + num(lb.value));
    return o;
}

Outcome c5() {
    Outcome o;
    const DomainRecord t1 = F_of_domain(named_shape("T1"), 0.02);
    const DomainRecord t2 = F_of_domain(named_shape("T2"), 0.02);
    const DomainRecord dk = F_of_domain(named_shape("disk(256)"), 0.02);
    o.require(std::abs(t1.sigma1 - 1.2908) <= 0.002, "sigma1(T1)");
    o.require(std::abs(t2.sigma1 - 0.7310) <= 0.002, "sigma1(T2)");
    o.require(std::abs(t1.F - 1.962) <= 0.01, "F(T1)");
    o.require(std::abs(t2.F - 1.977) <= 0.01, "F(T2)");
    o.require(rel(t1.mu1, 16.0 * kPi2 / 9.0) <= 3e-3, "mu1(T1)");
    o.require(rel(t2.mu1, kPi2) <= 3e-3, "mu1(T2)");
    o.require(rel(dk.x, 2.0 * kPi) <= 5e-3, "disk sigma1 P");
    o.require(rel(dk.y, kPi * kJp11 * kJp11) <= 5e-3, "disk mu1 |Omega|");
    o.note("sigma1(T1) " + num(t1.sigma1) + ", sigma1(T2) " + num(t2.sigma1) + ", F(T1) " + num(t1.F) + ", F(T2) " +
           num(t2.F) + ", disk x/2pi-1 " + num(dk.x / (2 * kPi) - 1) + ", disk y/(pi j'^2)-1 " +
           num(dk.y / (kPi * kJp11 * kJp11) - 1));
    return o;
}

Outcome c6() {
    Outcome o;
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    ThinOptions opt;
    opt.threads = 0;
    const ProfileH half = triangular(0.5).scaled(0.5);
    const ThinSweep rh = thin_sweep(half, half, eps, opt);
    const ProfileH one = constant_profile(0.5);
    const ThinSweep re = thin_sweep(one, one, eps, opt);
    o.require(rel(rh.mu1_limit, 4.0 * kJ01 * kJ01) <= 0.02, "rhombus mu1 limit");
    o.require(rel(rh.scaled_sigma_limit, kJ01 * kJ01) <= 0.03, "rhombus 2 sigma1 / eps limit");
    o.require(std::abs(re.F_limit - 1.0) <= 0.02, "rectangle F limit");
    o.note("rhombus mu1 " + num(rh.mu1_limit) + " (4j01^2 " + num(4 * kJ01 * kJ01) + "), 2sigma1/eps " +
           num(rh.scaled_sigma_limit) + " (j01^2 " + num(kJ01 * kJ01) + "), rectangle F " + num(re.F_limit));
    return o;
}

Outcome c7() {
    Outcome o;
    double worst_first = 0.0;
    for (std::uint64_t k = 0; k < 5; ++k) {
        const ProfileH phi = random_concave_direction(stream_seed(2024, k));
        for (const VariationReport& r : {first_variation_sigma(phi), first_variation_mu(phi), first_variation_F(phi)})
            worst_first = std::max(worst_first, r.relative_error);
    }
    const VariationReport aff = first_variation_F(ProfileH({0.0, 1.0}, {0.3, 1.0}));
    const SecondVariation sv = second_variation_F_linear(1.0);
    const EigenfunctionResiduals er = eigenfunction_derivative_residuals(1.0);
    const double target = (9.0 + kPi2) / (8.0 * kPi2);
    o.require(worst_first <= 1e-4, "first variations within 1e-4");
    o.require(std::abs(aff.finite_difference) <= 1e-6, "dF/dt along B + Ax");
    o.require(rel(sv.F.finite_difference, target) <= 1e-3, "second variation of F");
    o.require(er.max_residual() <= 1e-10, "eigenfunction derivative residuals");
    o.note("first " + num(worst_first) + ", affine " + num(aff.finite_difference) + ", F'' " +
           num(sv.F.finite_difference) + " vs " + num(target) + ", residual " + num(er.max_residual()));
    return o;
}

Outcome c8() {
    Outcome o;
    Campaign c;
    c.family = Family::RandomPolygon;
    c.count = 1000;
    c.seed = 7;
    c.h_max = 0.03;
    const CampaignResult r = run_campaign(c);
    const ConjectureReport& rep = r.report;
    o.require(rep.failures == 0, "all samples solved");
    o.require(rep.hard_violations == 0, "no proved-bound violations");
    o.require(rep.outside_box == 0, "inside [0,8pi] x [0,pi j'11^2]");
    o.note("F range [" + num(rep.min_F) + ", " + num(rep.max_F) + "], outside 1<=F<=2: " +
           std::to_string(rep.outside_band) + " (reported only), quality warnings " +
           std::to_string(rep.quality_warnings));
    return o;
}

Outcome c9() {
    Outcome o;
    gen::Rng rng(777);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ProfileH h = gen::random_concave(rng, gen::uniform(rng, 0.05, 0.5));
        worst = std::max(worst, rel(sigma1_kernel_oracle(h).eigenvalue, sigma1(h).eigenvalue));
    }
    o.require(worst <= 1e-3, "Galerkin vs kernel sigma1 within 1e-3");
    o.note("max relative gap " + num(worst));
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "1D cornerstone values", 10, c1},   {2, "triangular ratio", 30, c2},
        {3, "F(h) bounds", 300, c3},            {4, "bounds constants", 10, c4},
        {5, "FEM golden values", 300, c5},      {6, "thin-domain asymptotics", 600, c6},
        {7, "variation formulas", 300, c7},     {8, "diagram campaign", 1800, c8},
        {9, "oracle equivalence", 120, c9}};
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over the " + num(c.budget_s) + " s budget";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %d (%s) [%.1f s]: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
