#pragma once
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "minkstat/verifier.hpp"
#include "minkstat/version.hpp"

namespace minkstat {

using nlohmann::json;

inline json to_json(const ResidualReport& r) {
    json exclusions = json::array();
    for (const ExclusionCount& x : r.exclusions)
        exclusions.push_back({{"reason", x.reason}, {"count", x.count}});
    return json{{"schema_version", kReportSchemaVersion},
                {"version", kVersion},
                {"kind", "residual-scan"},
                {"family", r.family},
                {"alpha", r.alpha},
                {"grid", {{"n_s", r.n_s}, {"n_t", r.n_t}, {"points", r.n_points}}},
                {"max_residual", r.max_abs_residual},
                {"mean_residual", r.mean_abs_residual},
                {"fitted_alpha_mean", r.fitted_alpha_mean},
                {"fitted_alpha_std", r.fitted_alpha_std},
                {"indeterminate_alpha_points", r.n_indeterminate},
                {"exclusions", exclusions},
                {"tolerance", r.tol},
                {"verdict", r.pass ? "pass" : "fail"},
                {"seed", r.seed}};
}

/// Fixed CSV column order, documented in the README.
inline std::string to_csv(const ResidualReport& r) {
    std::string head = "family,alpha,n_s,n_t,points,max_residual,mean_residual,"
                       "fitted_alpha_mean,fitted_alpha_std,indeterminate,excluded,verdict,seed\n";
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%d,%d,%s,%llu\n",
                  r.family.c_str(), r.alpha, r.n_s, r.n_t, r.n_points, r.max_abs_residual,
                  r.mean_abs_residual, r.fitted_alpha_mean, r.fitted_alpha_std,
                  r.n_indeterminate, detail::total(r.exclusions), r.pass ? "pass" : "fail",
                  static_cast<unsigned long long>(r.seed));
    return head + buf;
}

inline json to_json(const TransportRegionStats& st) {
    return json{{"region", to_string(st.region)},
                {"count", st.count},
                {"fitted_alpha_mean", st.alpha_mean},
                {"fitted_alpha_std", st.alpha_std},
                {"indeterminate", st.indeterminate},
                {"stated_prediction", st.stated_prediction},
                {"sign_flipped_prediction", st.flipped_prediction},
                {"matched_variant", st.matched_variant}};
}

inline json to_json(const TransportReport& r) {
    json regions = json::array();
    for (const auto& st : r.regions) regions.push_back(to_json(st));
    return json{{"schema_version", kReportSchemaVersion},
                {"version", kVersion},
                {"kind", "inversion-transport"},
                {"family", r.family},
                {"n", r.n},
                {"source_alpha", r.alpha_known ? json(r.source_alpha) : json("any")},
                {"regions", regions},
                {"max_hv_discrepancy", r.max_hv_discrepancy},
                {"max_remark_discrepancy", r.max_remark_discrepancy},
                {"remark_complex_points", r.remark_complex_points},
                {"discrepancy_flag", r.discrepancy_flag},
                {"involution_max_err", r.involution_max_err},
                {"conformality_max_err", r.conformality_max_err},
                {"image_defect_max", r.image_defect_max},
                {"reference", r.reference_label},
                {"excluded", r.excluded},
                {"fd_step", r.fd_step}};
}

inline json to_json(const BranchReport& r) {
    return json{{"schema_version", kReportSchemaVersion},
                {"version", kVersion},
                {"kind", "ode-branch"},
                {"case", std::string(1, r.case_label)},
                {"mu", r.mu},
                {"k", r.k},
                {"c", r.c},
                {"sup_ab_residual", r.sup_ab_residual},
                {"obstruction", r.obstruction},
                {"obstruction_coefficients", r.obstruction_coeffs},
                {"obstruction_name", r.obstruction_name},
                {"ode1_residual", r.ode1_residual},
                {"amub_residual", r.amub_residual},
                {"degenerate_plane", r.degenerate_plane}};
}

inline json to_json(const ClassificationReport& r) {
    json j{{"schema_version", kReportSchemaVersion},
           {"version", kVersion},
           {"kind", "classification"},
           {"ruling_class", to_string(r.ruling)},
           {"verdict", to_string(r.verdict)},
           {"branch", r.branch},
           {"fit_residual", r.fit_residual},
           {"fit_scale", r.fit_scale},
           {"eps_region", r.eps_region},
           {"eps_normal", r.eps_normal},
           {"kappa_g_max", r.kappa_g_max},
           {"note", r.note}};
    if (r.indeterminate_alpha) j["alpha"] = "any";
    else if (r.verdict == Verdict::Stationary) j["alpha"] = r.alpha;
    else j["alpha"] = nullptr;
    return j;
}

inline json to_json(const MaxPrincipleRow& r) {
    return json{{"family", r.family},         {"applicable", r.applicable},
                {"far", r.far},               {"delta_witness", r.delta_witness},
                {"claimed_alpha", r.claimed_alpha}, {"alpha_exceeds_n", r.alpha_exceeds_n},
                {"vacuous", r.vacuous},       {"note", r.note}};
}

inline json to_json(const WitnessReport& r) {
    return json{{"schema_version", kReportSchemaVersion},
                {"version", kVersion},
                {"kind", "thnli2-witness"},
                {"lead_value", r.lead_value},
                {"a1_lead_value", r.a1_lead_value},
                {"degenerate_metric_m0", r.degenerate_w},
                {"classifier_verdict", to_string(r.classifier_verdict)},
                {"pass", r.pass}};
}

/// Write via a temp file and rename, so readers never see partial output.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open output file: " + tmp.string());
        out << content;
        if (!out) throw Error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace minkstat
