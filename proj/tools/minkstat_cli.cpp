// Command-line front end: verify catalog families, classify sampled ruled
// surfaces, push charts through the inversion, explore the ODE proof cases,
// sweep the whole catalog bank, and export meshes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minkstat/reports_io.hpp"
#include "minkstat/spline.hpp"

namespace ms = minkstat;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonOpts {
    std::string out;
    std::string format = "json";
};

void emit(const json& j, const CommonOpts& common, const std::string& csv = "") {
    std::string payload;
    if (common.format == "csv" && !csv.empty()) payload = csv;
    else payload = j.dump(2) + "\n";
    if (common.out.empty()) {
        std::cout << payload;
    } else {
        ms::atomic_write(common.out, payload);
        std::cout << "report written to " << common.out << "\n";
    }
}

/// Merge --n/--r/--param style flags into a family id query string.
std::string merge_id(const std::string& base, const std::vector<std::string>& kvs) {
    if (kvs.empty()) return base;
    std::string id = base;
    id += base.find('?') == std::string::npos ? '?' : '&';
    for (std::size_t i = 0; i < kvs.size(); ++i) {
        if (i) id += '&';
        id += kvs[i];
    }
    return id;
}

struct GridArg {
    double lo = 0.0, hi = 1.0;
    int n = 16;
};

GridArg parse_grid(const std::string& text) {
    GridArg g;
    char colon1 = 0, colon2 = 0;
    std::istringstream ss(text);
    if (!(ss >> g.lo >> colon1 >> g.hi >> colon2 >> g.n) || colon1 != ':' || colon2 != ':' ||
        g.n < 2 || !(g.hi > g.lo))
        throw ms::InvalidArgument("bad grid spec '" + text + "', expected lo:hi:count");
    return g;
}

int cmd_verify(const std::string& id, std::optional<double> alpha, std::optional<int> ns,
               std::optional<int> nt, double tol, const CommonOpts& common) {
    const ms::Family fam = ms::make_family(id);
    double a;
    if (alpha) a = *alpha;
    else if (!fam.spec.alpha_any) a = fam.spec.claimed_alpha;
    else throw ms::InvalidArgument("family '" + id + "' is stationary for every alpha; pass --alpha");
    std::optional<ms::GridSpec> grid;
    if (ns || nt) {
        ms::GridSpec g = fam.spec.grid;
        if (ns) g.n_s = g.n_axis = *ns;
        if (nt) g.n_t = *nt;
        grid = g;
    }
    const ms::ResidualReport rep = ms::residual_scan(fam, a, grid, tol);
    emit(ms::to_json(rep), common, ms::to_csv(rep));
    return rep.pass ? kExitPass : kExitFail;
}

ms::RuledChart load_sampled_chart(const std::string& path, double t_lo, double t_hi) {
    std::ifstream in(path);
    if (!in) throw ms::InvalidArgument("cannot open input file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ms::InvalidArgument("empty CSV: " + path);
    // Tolerate an optional UTF-8 BOM and CR line endings.
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line != "s,g1,g2,g3,w1,w2,w3")
        throw ms::InvalidArgument("CSV header must be exactly 's,g1,g2,g3,w1,w2,w3'");
    std::vector<double> ss;
    std::vector<ms::MVec> gs, ws;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        std::stringstream row(line);
        double v[7];
        char comma;
        if (!(row >> v[0])) throw ms::InvalidArgument("bad CSV row " + std::to_string(lineno));
        for (int i = 1; i < 7; ++i)
            if (!(row >> comma >> v[i]) || comma != ',')
                throw ms::InvalidArgument("bad CSV row " + std::to_string(lineno));
        if (!ss.empty() && v[0] <= ss.back())
            throw ms::InvalidArgument("CSV abscissae must be strictly increasing (row " +
                                      std::to_string(lineno) + ")");
        ss.push_back(v[0]);
        gs.push_back(ms::MVec{v[1], v[2], v[3]});
        ws.push_back(ms::MVec{v[4], v[5], v[6]});
    }
    if (ss.size() < 8) throw ms::InvalidArgument("need at least 8 samples, got " +
                                                 std::to_string(ss.size()));
    ms::Curve gamma = ms::spline_curve(ss, gs);
    ms::Curve w = ms::spline_curve(ss, ws);
    // Keep a margin off the spline ends where interpolation error concentrates.
    const double span = ss.back() - ss.front();
    const ms::Interval s_range{ss.front() + 0.05 * span, ss.back() - 0.05 * span};
    return ms::RuledChart::from_curves(gamma, w, s_range, ms::Interval{t_lo, t_hi});
}

int cmd_classify(const std::string& path, double t_lo, double t_hi, double rtol, int ns,
                 const CommonOpts& common) {
    const ms::RuledChart chart = load_sampled_chart(path, t_lo, t_hi);
    ms::ClassifyOptions opt;
    opt.rtol = rtol;
    opt.n_s = ns;
    const ms::ClassificationReport rep = ms::classify_ruled(chart, opt);
    json j = ms::to_json(rep);
    j["input"] = path;
    emit(j, common);
    std::printf("class: %s\n", ms::to_string(rep.ruling));
    if (rep.indeterminate_alpha)
        std::printf("verdict: %s (every alpha)\n", ms::to_string(rep.verdict));
    else if (rep.verdict == ms::Verdict::Stationary)
        std::printf("verdict: stationary, alpha = %.9g, branch %s\n", rep.alpha,
                    rep.branch.c_str());
    else
        std::printf("verdict: %s\n", ms::to_string(rep.verdict));
    return kExitPass;
}

int cmd_invert(const std::string& id, std::optional<int> ns, std::optional<int> nt,
               const CommonOpts& common) {
    const ms::Family fam = ms::make_family(id);
    ms::TransportOptions opt;
    if (fam.transport_domain) opt.domain = fam.transport_domain;
    if (ns) opt.n_s = *ns;
    if (nt) opt.n_t = *nt;
    const ms::TransportReport rep = ms::inversion_transport(fam, opt);
    emit(ms::to_json(rep), common);
    for (const auto& st : rep.regions)
        std::printf("image region %s: fitted alpha = %.9g (std %.3g, %d points), %s\n",
                    ms::to_string(st.region), st.alpha_mean, st.alpha_std, st.count,
                    st.matched_variant.c_str());
    if (rep.discrepancy_flag)
        std::printf("transport relations: measured discrepancy flagged (hv %.3g, remark %.3g)\n",
                    rep.max_hv_discrepancy, rep.max_remark_discrepancy);
    return kExitPass;
}

int cmd_branch(int mu, double k, const std::vector<double>& c, double s_lo, double s_hi,
               int ns, const CommonOpts& common) {
    if (c.size() != 4) throw ms::InvalidArgument("--c needs exactly four constants");
    ms::OdeBranchSpec sp;
    sp.mu = mu;
    sp.k = k;
    sp.c = {c[0], c[1], c[2], c[3]};
    const ms::BranchReport rep =
        ms::ode_branch_explore(sp, ms::Interval{s_lo, s_hi}.grid(ns));
    emit(ms::to_json(rep), common);
    std::printf("case (%c): %s =", rep.case_label, rep.obstruction_name.c_str());
    for (double v : rep.obstruction_coeffs) std::printf(" %.9g", v);
    std::printf("  (norm %.9g), sup |ab-residual| = %.3g\n", rep.obstruction,
                rep.sup_ab_residual);
    return kExitPass;
}

int cmd_scan_catalog(double tol, const CommonOpts& common) {
    json all = json::array();
    bool ok = true;
    for (const std::string& id : ms::stationary_family_ids()) {
        const ms::Family fam = ms::make_family(id);
        const double a = fam.spec.alpha_any ? 1.0 : fam.spec.claimed_alpha;
        const ms::ResidualReport rep = ms::residual_scan(fam, a, std::nullopt, tol);
        ok = ok && rep.pass;
        json j = ms::to_json(rep);
        if (fam.spec.alpha_any) j["note"] = "alpha arbitrary (vector plane); scanned at alpha=1";
        all.push_back(j);
        std::printf("%-28s alpha=%8.3f max|res|=%10.3e  %s\n", id.c_str(), a,
                    rep.max_abs_residual, rep.pass ? "pass" : "FAIL");
    }
    emit(json{{"schema_version", ms::kReportSchemaVersion},
              {"version", ms::kVersion},
              {"kind", "catalog-scan"},
              {"all_pass", ok},
              {"reports", all}},
         common);
    return ok ? kExitPass : kExitFail;
}

int cmd_mesh(const std::string& id, const GridArg& sg, const GridArg& tg,
             const std::string& out_base) {
    const ms::Family fam = ms::make_family(id);
    if (!fam.chart) throw ms::InvalidArgument("family '" + id + "' has no dim-3 chart to mesh");
    const ms::SurfaceChart& chart = *fam.chart;

    std::vector<int> vid(static_cast<std::size_t>(sg.n) * tg.n, 0);
    std::ostringstream obj, csv;
    csv << "vertex,s,t,x1,x2,x3,xx,H,fitted_alpha\n";
    int next = 1, excluded_vertices = 0;
    for (int i = 0; i < sg.n; ++i) {
        const double s = sg.lo + (sg.hi - sg.lo) * i / (sg.n - 1);
        for (int j = 0; j < tg.n; ++j) {
            const double t = tg.lo + (tg.hi - tg.lo) * j / (tg.n - 1);
            try {
                const ms::ChartJet2 jet = chart.jets(s, t);
                const double H = ms::mean_curvature(jet);
                const double xx = ms::mink_dot(jet.X, jet.X);
                std::string alpha;
                try {
                    char buf[32];
                    std::snprintf(buf, sizeof(buf), "%.12g", ms::fit_alpha(jet));
                    alpha = buf;
                } catch (const ms::Error&) {
                    alpha = "";  // indeterminate or cone band
                }
                vid[static_cast<std::size_t>(i) * tg.n + j] = next;
                obj << "v " << jet.X[0] << ' ' << jet.X[1] << ' ' << jet.X[2] << '\n';
                csv << next << ',' << s << ',' << t << ',' << jet.X[0] << ',' << jet.X[1]
                    << ',' << jet.X[2] << ',' << xx << ',' << H << ',' << alpha << '\n';
                ++next;
            } catch (const ms::Error&) {
                ++excluded_vertices;
            }
        }
    }
    int faces = 0, omitted_cells = 0;
    std::ostringstream fbuf;
    for (int i = 0; i + 1 < sg.n; ++i)
        for (int j = 0; j + 1 < tg.n; ++j) {
            const int a = vid[static_cast<std::size_t>(i) * tg.n + j];
            const int b = vid[static_cast<std::size_t>(i) * tg.n + j + 1];
            const int c = vid[static_cast<std::size_t>(i + 1) * tg.n + j];
            const int d = vid[static_cast<std::size_t>(i + 1) * tg.n + j + 1];
            if (a && b && c && d) {
                fbuf << "f " << a << ' ' << b << ' ' << d << '\n';
                fbuf << "f " << a << ' ' << d << ' ' << c << '\n';
                faces += 2;
            } else {
                ++omitted_cells;
            }
        }
    std::ostringstream head;
    head << "# minkstat mesh " << id << "\n# vertices " << next - 1 << " faces " << faces
         << " excluded_vertices " << excluded_vertices << " omitted_cells " << omitted_cells
         << "\n";
    ms::atomic_write(out_base + ".obj", head.str() + obj.str() + fbuf.str());
    csv << "# excluded_vertices," << excluded_vertices << ",omitted_cells," << omitted_cells
        << '\n';
    ms::atomic_write(out_base + ".csv", csv.str());
    std::printf("wrote %s.obj (%d vertices, %d faces) and %s.csv\n", out_base.c_str(), next - 1,
                faces, out_base.c_str());
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"minkstat: stationary-hypersurface verification in Lorentz-Minkowski space"};
    app.set_config("--config", "", "optional config file (TOML-style); flags win");
    app.require_subcommand(1);
    app.set_version_flag("--version", ms::kVersion);

    CommonOpts common;
    app.add_option("--out", common.out, "write the report to this file (atomic)")
        ->capture_default_str();
    app.add_option("--format", common.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    // verify
    auto* verify = app.add_subcommand("verify", "residual-scan a catalog family");
    std::string family_id;
    std::optional<double> alpha;
    std::optional<int> ns, nt;
    double tol = 1e-8;
    std::vector<std::string> params;
    std::optional<double> n_flag, r_flag;
    verify->add_option("family", family_id, "family id, e.g. pr1-2a or thnli-1b?c1=1&c2=0")
        ->required();
    verify->add_option("--alpha", alpha, "alpha to test (default: the family's claim)");
    verify->add_option("--n", n_flag, "hypersurface dimension parameter");
    verify->add_option("--r", r_flag, "radius parameter");
    verify->add_option("--param", params, "extra family parameters as key=value");
    verify->add_option("--ns", ns, "s-grid points");
    verify->add_option("--nt", nt, "t-grid points");
    verify->add_option("--tol", tol, "pass tolerance on max |residual|")->capture_default_str();

    // classify
    auto* classify = app.add_subcommand("classify", "classify a sampled ruled surface CSV");
    std::string input_csv;
    double t_lo = -1.0, t_hi = 0.0, rtol = 1e-6;
    int cls_ns = 33;
    classify->add_option("input", input_csv, "CSV with header s,g1,g2,g3,w1,w2,w3")->required();
    classify->add_option("--t-lo", t_lo, "lower end of the t-window")->capture_default_str();
    classify->add_option("--t-hi", t_hi, "upper end of the t-window")->capture_default_str();
    classify->add_option("--rtol", rtol, "stationarity threshold on the fitted residual")
        ->capture_default_str();
    classify->add_option("--ns", cls_ns, "number of s samples")->capture_default_str();

    // invert
    auto* invert = app.add_subcommand("invert", "push a family through the inversion");
    std::string inv_id;
    std::optional<int> inv_ns, inv_nt;
    std::vector<std::string> inv_params;
    std::optional<double> inv_c;
    invert->add_option("family", inv_id, "family id")->required();
    invert->add_option("--c", inv_c, "plane offset parameter");
    invert->add_option("--param", inv_params, "extra family parameters as key=value");
    invert->add_option("--ns", inv_ns, "s-grid points");
    invert->add_option("--nt", inv_nt, "t-grid points");

    // branch
    auto* branch = app.add_subcommand("branch", "evaluate one ODE proof case");
    int mu = 1;
    double kk = 1.0;
    std::vector<double> cvals;
    double s_lo = -2.0, s_hi = 2.0;
    int br_ns = 201;
    branch->add_option("--mu", mu, "sign of <w',w'>")->required()->check(CLI::IsMember({-1, 1}));
    branch->add_option("--k", kk, "k = alpha*beta")->required();
    branch->add_option("--c", cvals, "constants c1,c2,c3,c4")->required()->delimiter(',');
    branch->add_option("--smin", s_lo, "grid start")->capture_default_str();
    branch->add_option("--smax", s_hi, "grid end")->capture_default_str();
    branch->add_option("--ns", br_ns, "grid points")->capture_default_str();

    // scan-catalog
    auto* scan = app.add_subcommand("scan-catalog", "verify every stationary catalog family");
    double scan_tol = 1e-8;
    scan->add_option("--tol", scan_tol, "pass tolerance")->capture_default_str();

    // mesh
    auto* mesh = app.add_subcommand("mesh", "export an OBJ mesh plus per-vertex CSV");
    std::string mesh_id, s_spec, t_spec, mesh_out = "mesh";
    mesh->add_option("family", mesh_id, "family id")->required();
    mesh->add_option("--s", s_spec, "s grid as lo:hi:count")->required();
    mesh->add_option("--t", t_spec, "t grid as lo:hi:count")->required();
    mesh->add_option("--o", mesh_out, "output base name")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*verify) {
            std::vector<std::string> kvs = params;
            if (n_flag) kvs.push_back("n=" + std::to_string(static_cast<int>(*n_flag)));
            if (r_flag) kvs.push_back("r=" + std::to_string(*r_flag));
            return cmd_verify(merge_id(family_id, kvs), alpha, ns, nt, tol, common);
        }
        if (*classify) return cmd_classify(input_csv, t_lo, t_hi, rtol, cls_ns, common);
        if (*invert) {
            std::vector<std::string> kvs = inv_params;
            if (inv_c) kvs.push_back("c=" + std::to_string(*inv_c));
            return cmd_invert(merge_id(inv_id, kvs), inv_ns, inv_nt, common);
        }
        if (*branch) return cmd_branch(mu, kk, cvals, s_lo, s_hi, br_ns, common);
        if (*scan) return cmd_scan_catalog(scan_tol, common);
        if (*mesh) return cmd_mesh(mesh_id, parse_grid(s_spec), parse_grid(t_spec), mesh_out);
    } catch (const ms::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ms::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
