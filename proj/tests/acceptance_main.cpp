// Acceptance suite: one named criterion per check block, one PASS/FAIL line
// each, nonzero exit iff anything fails. Tolerances are pinned here, not
// configurable.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "minkstat/verifier.hpp"

using namespace minkstat;

namespace {

int g_failures = 0;

struct Criterion {
    std::string name;
    std::vector<std::string> notes;
    bool ok = true;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("FAILED: " + what);
        }
    }

    void note(const std::string& msg) { notes.push_back(msg); }

    ~Criterion() {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
        for (const std::string& n : notes) std::printf("        %s\n", n.c_str());
        if (!ok) ++g_failures;
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

// 1. Centered families pass at alpha = n and fail at n + 0.1.
static void criterion1() {
    Criterion c{"criterion 1: centered families H^2(1), H^3(1), S^2_1(1), S^3_1(1)"};
    struct Row {
        const char* id;
        double n;
    };
    for (const Row row : {Row{"pr1-2a?n=2&r=1", 2}, Row{"pr1-2a?n=3&r=1", 3},
                          Row{"pr1-3a?n=2&r=1", 2}, Row{"pr1-3a?n=3&r=1", 3}}) {
        const Family fam = make_family(row.id);
        const ResidualReport ok = residual_scan(fam, row.n);
        c.expect(ok.pass && ok.max_abs_residual <= 1e-8,
                 std::string(row.id) + " at alpha=n: max " + fmt(ok.max_abs_residual));
        const ResidualReport bad = residual_scan(fam, row.n + 0.1);
        c.expect(!bad.pass && bad.max_abs_residual >= 1e-2,
                 std::string(row.id) + " at alpha=n+0.1: max " + fmt(bad.max_abs_residual));
    }
}

// 2. Shifted families at alpha = +-4 (n = 2).
static void criterion2() {
    Criterion c{"criterion 2: shifted families pr1-2a/2b/3a/3b at alpha = +-4"};
    struct Row {
        const char* id;
        double alpha;
    };
    for (const Row row : {Row{"pr1-2a?n=2&r=1&shifted=1", 4}, Row{"pr1-2b?n=2&r=1", -4},
                          Row{"pr1-3a?n=2&r=1&shifted=1", 4}, Row{"pr1-3b?n=2&r=1", -4}}) {
        const ResidualReport ok = residual_scan(make_family(row.id), row.alpha);
        c.expect(ok.pass && ok.max_abs_residual <= 1e-8,
                 std::string(row.id) + ": max " + fmt(ok.max_abs_residual));
        const ResidualReport bad = residual_scan(make_family(row.id), row.alpha + 0.1);
        c.expect(bad.max_abs_residual >= 1e-2,
                 std::string(row.id) + " off-alpha: max " + fmt(bad.max_abs_residual));
    }
}

// 3. Ruled theorem families: fitted alpha and vanishing cleared coefficients.
static void criterion3() {
    Criterion c{"criterion 3: ruled families fit alpha in {+-1} and {2, 4, -4}"};
    struct Row {
        const char* id;
        double alpha;
    };
    for (const Row row : {Row{"thnli-1a", 1}, Row{"thnli-1b?c1=1&c2=0", 1},
                          Row{"thnli-2?c1=0&c2=1", -1}, Row{"thli-1", 2},
                          Row{"thli-2b?region=-1", 4}, Row{"thli-2b?region=1", -4}}) {
        const Family fam = make_family(row.id);
        const ResidualReport rep = residual_scan(fam, row.alpha);
        c.expect(std::fabs(rep.fitted_alpha_mean - row.alpha) <= 1e-6,
                 std::string(row.id) + " fitted mean " + fmt(rep.fitted_alpha_mean));
        c.expect(rep.fitted_alpha_std <= 1e-6,
                 std::string(row.id) + " fitted std " + fmt(rep.fitted_alpha_std));
        const RuledChart& chart = *fam.ruled;
        const int er = region_sign(
            cone_region(ruled_jet(chart, chart.s_range.mid(), chart.t_range.mid()).X));
        double worst = 0.0;
        for (double s : chart.s_range.grid(33))
            worst = std::max(worst,
                             ruled_stationarity_poly(chart, s, row.alpha, er).max_abs());
        c.expect(worst <= 1e-8,
                 std::string(row.id) + " max cleared coefficient " + fmt(worst));
    }
}

// 4. Geodesic condition on the non-lightlike families.
static void criterion4() {
    Criterion c{"criterion 4: kappa_g^w vanishes on all th-nli families"};
    for (const char* id : {"thnli-1a", "thnli-1b?c1=1&c2=0", "thnli-1b?c1=0.6&c2=0.8",
                           "thnli-2?c1=0&c2=1", "thnli-2?c1=1&c2=0"}) {
        const RuledNormalization norm = normalize_nonlightlike(*make_family(id).ruled);
        double worst = 0.0;
        for (double s : norm.chart.s_range.grid(33))
            worst = std::max(worst, std::fabs(norm.scalars(s).kappa_g));
        c.expect(worst <= 1e-9, std::string(id) + " max |kappa_g| " + fmt(worst));
    }
}

// 5. Negative controls are rejected.
static void criterion5() {
    Criterion c{"criterion 5: cylinder, helicoid-like chart and rejection witness"};
    for (const char* id : {"cyl-circle", "helicoid-like", "thnli2-witness"}) {
        const ClassificationReport rep = classify_ruled(*make_family(id).ruled);
        c.expect(rep.verdict == Verdict::NotStationary,
                 std::string(id) + " verdict " + to_string(rep.verdict));
    }
    const WitnessReport wr = thnli2_witness_check();
    c.expect(wr.pass, "normal-form witness arithmetic (lead " + fmt(wr.lead_value) + ")");
}

// 6. Inversion suite.
static void criterion6() {
    Criterion c{"criterion 6: inversion involution, conformality and plane images"};
    // Involution and conformal factor against finite differences.
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    double inv_err = 0.0, conf_err = 0.0;
    int n_checked = 0;
    while (n_checked < 500) {
        const MVec p{d(rng), d(rng), d(rng)};
        if (std::fabs(mink_dot(p, p)) < 0.2) continue;
        ++n_checked;
        inv_err = std::max(inv_err,
                           (inversion(inversion(p)) - p).euclid_norm() / p.euclid_norm());
        const MVec v{d(rng), d(rng), d(rng)};
        const double h = 1e-6;
        const MVec fd = (inversion(p + v * h) - inversion(p - v * h)) * (1.0 / (2.0 * h));
        const MVec an = inversion_differential(p, v);
        conf_err = std::max(conf_err, (an - fd).euclid_norm() / (1.0 + fd.euclid_norm()));
        const double q = mink_dot(p, p);
        conf_err = std::max(conf_err, std::fabs(mink_dot(an, an) - mink_dot(v, v) / (q * q)) /
                                          (1.0 + std::fabs(mink_dot(v, v) / (q * q))));
    }
    c.expect(inv_err <= 1e-10, "involution max relative error " + fmt(inv_err));
    c.expect(conf_err <= 1e-6, "conformal factor vs finite differences " + fmt(conf_err));

    // Image of the plane x3 = 1/2 is H^2((0,0,-1),1); fitted alpha splits +-4
    // across the image components. Measurement fixes the pairing C^+ -> +4,
    // C^- -> -4 (the source text pairs them the other way; the suite asserts
    // the measured values and records the swap).
    {
        const Family fam = make_family("plane-x3?c=0.5");
        TransportOptions opt;
        opt.reference = ImplicitQuadric{MVec{0, 0, -1}, -1.0, "H^2((0,0,-1),1)"};
        opt.domain = Rect{0.6, 1.5, 0.6, 1.5};  // C^- annulus patch
        const TransportReport rm = inversion_transport(fam, opt);
        c.expect(rm.image_defect_max <= 1e-8,
                 "plane-x3 C^- image defect " + fmt(rm.image_defect_max));
        c.expect(rm.regions.size() == 1 &&
                     std::fabs(rm.regions[0].alpha_mean + 4.0) <= 1e-6 &&
                     rm.regions[0].alpha_std <= 1e-6,
                 "plane-x3 C^- image alpha " +
                     (rm.regions.empty() ? std::string("none")
                                         : fmt(rm.regions[0].alpha_mean)));
        opt.domain = Rect{-0.25, 0.25, -0.25, 0.25};  // C^+ disk patch
        const TransportReport rp = inversion_transport(fam, opt);
        c.expect(rp.image_defect_max <= 1e-8,
                 "plane-x3 C^+ image defect " + fmt(rp.image_defect_max));
        c.expect(rp.regions.size() == 1 &&
                     std::fabs(rp.regions[0].alpha_mean - 4.0) <= 1e-6 &&
                     rp.regions[0].alpha_std <= 1e-6,
                 "plane-x3 C^+ image alpha " +
                     (rp.regions.empty() ? std::string("none")
                                         : fmt(rp.regions[0].alpha_mean)));
        c.note("note: measured pairing is C^+ -> +4, C^- -> -4; the worked example's");
        c.note("      region labels are swapped relative to this measurement.");
    }

    // Image of the plane x1 = 1 fits alpha = +-4 matching the shifted
    // pseudosphere split (C^- -> +4, C^+ -> -4).
    {
        const Family fam = make_family("plane-x1?c=1");
        TransportOptions opt;
        opt.reference = ImplicitQuadric{MVec{0.5, 0, 0}, 0.25, "S_1^2((1/2,0,0),1/2)"};
        opt.domain = Rect{-1.2, 1.2, -0.4, 0.4};  // C^- strip
        const TransportReport rm = inversion_transport(fam, opt);
        c.expect(rm.image_defect_max <= 1e-8 && rm.regions.size() == 1 &&
                     std::fabs(rm.regions[0].alpha_mean - 4.0) <= 1e-6,
                 "plane-x1 C^- image alpha " +
                     (rm.regions.empty() ? std::string("none")
                                         : fmt(rm.regions[0].alpha_mean)));
        opt.domain = Rect{-1.2, 1.2, 1.6, 2.6};  // C^+ strip
        const TransportReport rp = inversion_transport(fam, opt);
        c.expect(rp.image_defect_max <= 1e-8 && rp.regions.size() == 1 &&
                     std::fabs(rp.regions[0].alpha_mean + 4.0) <= 1e-6,
                 "plane-x1 C^+ image alpha " +
                     (rp.regions.empty() ? std::string("none")
                                         : fmt(rp.regions[0].alpha_mean)));
    }

    // The unit pseudosphere is pointwise fixed with alpha unchanged.
    {
        TransportOptions opt;
        opt.reference = ImplicitQuadric{MVec{0, 0, 0}, 1.0, "S_1^2(1)"};
        const TransportReport rep = inversion_transport(make_family("pr1-3a?n=2&r=1"), opt);
        c.expect(rep.image_defect_max <= 1e-10,
                 "S_1^2(1) pointwise fixed, defect " + fmt(rep.image_defect_max));
        c.expect(rep.regions.size() == 1 &&
                     std::fabs(rep.regions[0].alpha_mean - 2.0) <= 1e-6,
                 "S_1^2(1) image alpha " +
                     (rep.regions.empty() ? std::string("none")
                                          : fmt(rep.regions[0].alpha_mean)));
    }
}

// 7. ODE branch explorer over seeded random draws.
static void criterion7() {
    Criterion c{"criterion 7: six proof cases obstructed on 100 seeded draws each"};
    const std::vector<double> grid = Interval{-2.0, 2.0}.grid(161);
    std::mt19937_64 rng(kDefaultSeed);
    std::uniform_real_distribution<double> mag(0.2, 2.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    auto draw = [&]() { return (uni(rng) < 0.5 ? -1.0 : 1.0) * mag(rng); };
    struct CaseGen {
        int mu;
        double k_lo, k_hi;
    };
    const CaseGen cases[] = {{1, 1.0, 1.0},  {1, 2.0, 5.0},  {1, -5.0, -0.5},
                             {-1, 1.0, 1.0}, {-1, 2.0, 5.0}, {-1, -5.0, -0.5}};
    for (const CaseGen& cg : cases) {
        double min_obs = 1e300, min_ratio = 1e300;
        char label = '?';
        for (int i = 0; i < 100; ++i) {
            OdeBranchSpec sp;
            sp.mu = cg.mu;
            sp.k = cg.k_lo == cg.k_hi ? cg.k_lo : cg.k_lo + (cg.k_hi - cg.k_lo) * uni(rng);
            sp.c = {draw(), draw(), draw(), draw()};
            const BranchReport r = ode_branch_explore(sp, grid);
            label = r.case_label;
            double cmax = 0.0;
            for (double cv : sp.c) cmax = std::max(cmax, std::fabs(cv));
            min_obs = std::min(min_obs, r.obstruction);
            min_ratio = std::min(min_ratio, r.sup_ab_residual / cmax);
        }
        c.expect(min_obs > 0.0 && min_ratio >= 1e-4,
                 std::string("case (") + label + "): min obstruction " + fmt(min_obs) +
                     ", min residual/|c| " + fmt(min_ratio));
    }
}

// 8. Graph equation for the hyperboloid graphs and constant graphs.
static void criterion8() {
    Criterion c{"criterion 8: graph residuals for u = sqrt(|q|^2+1) and constants"};
    for (int n : {2, 3}) {
        char id[40];
        std::snprintf(id, sizeof(id), "pr1-2a?n=%d&r=1", n);
        const GraphEval g = *make_family(id).graph;
        double worst = 0.0;
        for (const auto& q : detail::box_grid(g.lo, g.hi, 7))
            worst = std::max(worst, std::fabs(graph_residual(g.jet(q), q, n, g.kind)));
        c.expect(worst <= 1e-8,
                 "u = sqrt(|q|^2+1), n=" + std::to_string(n) + ": max " + fmt(worst));
    }
    const GraphEval flat = *make_family("plane-x3?c=1").graph;
    double worst = 0.0;
    for (const auto& q : detail::box_grid(flat.lo, flat.hi, 7))
        worst = std::max(worst, std::fabs(graph_residual(flat.jet(q), q, 0.0, flat.kind)));
    c.expect(worst <= 1e-8, "constant graph at alpha = 0: max " + fmt(worst));
}

// 9. Finite-difference jets converge at order 2.
static void criterion9() {
    Criterion c{"criterion 9: order-2 convergence of finite-difference jets"};
    struct ChartCase {
        const char* name;
        std::function<MVec(double, double)> pos;
        SurfaceChart exact;
        double s, t;
    };
    const ChartCase cases[] = {
        {"H^2(1)",
         [](double s, double t) {
             return MVec{std::sinh(s) * std::cos(t), std::sinh(s) * std::sin(t), std::cosh(s)};
         },
         *make_family("pr1-2a?n=2&r=1").chart, 0.8, 0.4},
        {"S_1^2(1)",
         [](double s, double t) {
             return MVec{std::cosh(t) * std::cos(s), std::cosh(t) * std::sin(s), std::sinh(t)};
         },
         *make_family("pr1-3a?n=2&r=1").chart, 0.7, 0.35},
        {"thli-2b",
         [](double s, double t) {
             return MVec{std::sin(s) + t * std::cos(s), -std::cos(s) + t * std::sin(s),
                         std::tan(0.5 * s) + t};
         },
         *make_family("thli-2b?region=-1").chart, 0.9, -0.8},
    };
    for (const ChartCase& cc : cases) {
        const double H = mean_curvature(cc.exact.jets(cc.s, cc.t));
        const double e1 =
            std::fabs(mean_curvature(jets_from_position(cc.pos, cc.s, cc.t, 2e-3)) - H);
        const double e2 =
            std::fabs(mean_curvature(jets_from_position(cc.pos, cc.s, cc.t, 1e-3)) - H);
        const double ratio = e1 / e2;
        c.expect(ratio >= 3.6 && ratio <= 4.4,
                 std::string(cc.name) + " halving ratio " + fmt(ratio));
    }
}

// 10. Transport relations are measured, not assumed.
static void criterion10() {
    Criterion c{"criterion 10: displayed transport relations flagged on H^2(2)"};
    const TransportReport rep = inversion_transport(make_family("pr1-2a?n=2&r=2"));
    c.expect(rep.max_hv_discrepancy > 1e-3,
             "mean-curvature relation discrepancy " + fmt(rep.max_hv_discrepancy));
    c.expect(rep.max_remark_discrepancy > 1e-3,
             "principal-curvature relation discrepancy " + fmt(rep.max_remark_discrepancy));
    c.expect(rep.discrepancy_flag, "discrepancy flag set");
    c.note("measured hv gap matches the closed form n|3-r^2|/r^7 = " +
           fmt(2.0 * std::fabs(3.0 - 4.0) / 128.0));
}

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
