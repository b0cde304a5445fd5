#pragma once
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minkstat/catalog.hpp"
#include "minkstat/ruled.hpp"
#include "minkstat/surface.hpp"

namespace minkstat {

inline constexpr std::uint64_t kDefaultSeed = 20250810ULL;

// --------------------------------------------------------------------------
// Residual scans.
// --------------------------------------------------------------------------

struct ExclusionCount {
    std::string reason;
    int count = 0;
};

struct ResidualReport {
    std::string family;
    double alpha = 0.0;
    int n_s = 0, n_t = 0;       // grid shape (n_s x n_t, or per-axis for graphs)
    int n_points = 0;
    int n_evaluated = 0;
    double max_abs_residual = 0.0;
    double mean_abs_residual = 0.0;
    double fitted_alpha_mean = 0.0;
    double fitted_alpha_std = 0.0;
    int n_indeterminate = 0;    // points where every alpha fits
    std::vector<ExclusionCount> exclusions;
    double tol = 1e-8;
    bool pass = false;
    std::uint64_t seed = kDefaultSeed;
};

namespace detail {

inline void bump(std::vector<ExclusionCount>& xs, const std::string& reason) {
    for (ExclusionCount& x : xs)
        if (x.reason == reason) {
            ++x.count;
            return;
        }
    xs.push_back({reason, 1});
}

inline int total(const std::vector<ExclusionCount>& xs) {
    int t = 0;
    for (const ExclusionCount& x : xs) t += x.count;
    return t;
}

struct Welford {
    std::vector<double> vals;

    void add(double v) { vals.push_back(v); }

    double mean() const {
        if (vals.empty()) return 0.0;
        double s = 0.0;
        for (double v : vals) s += v;
        return s / static_cast<double>(vals.size());
    }

    double stddev() const {
        if (vals.size() < 2) return 0.0;
        const double m = mean();
        double s = 0.0;
        for (double v : vals) s += (v - m) * (v - m);
        return std::sqrt(s / static_cast<double>(vals.size() - 1));
    }
};

/// Row-major sweep of an n-dimensional box, deterministic order.
inline std::vector<std::vector<double>> box_grid(const std::vector<double>& lo,
                                                 const std::vector<double>& hi, int per_axis) {
    const std::size_t n = lo.size();
    std::vector<std::vector<double>> out;
    std::vector<int> idx(n, 0);
    while (true) {
        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i)
            q[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / std::max(1, per_axis - 1);
        out.push_back(q);
        std::size_t j = 0;
        while (j < n && ++idx[j] >= per_axis) idx[j++] = 0;
        if (j == n) break;
    }
    return out;
}

} // namespace detail

/**
 * Evaluate the stationarity residual of a catalog family over its default
 * grid (chart path when a chart exists, graph path otherwise). Exclusions
 * are counted, never thrown; the verdict requires max residual within tol
 * and exclusions below 20% of the grid.
 */
inline ResidualReport residual_scan(const Family& fam, double alpha,
                                    std::optional<GridSpec> grid_override = std::nullopt,
                                    double tol = 1e-8) {
    ResidualReport rep;
    rep.family = fam.spec.id;
    rep.alpha = alpha;
    rep.tol = tol;
    const GridSpec grid = grid_override.value_or(fam.spec.grid);

    detail::Welford fits;
    double sum_abs = 0.0;

    auto consume = [&](double residual, std::optional<double> fit) {
        rep.n_evaluated += 1;
        const double a = std::fabs(residual);
        rep.max_abs_residual = std::max(rep.max_abs_residual, a);
        sum_abs += a;
        if (fit) fits.add(*fit);
    };

    if (fam.chart) {
        rep.n_s = grid.n_s;
        rep.n_t = grid.n_t;
        const Rect dom = fam.chart->domain;
        for (int i = 0; i < grid.n_s; ++i) {
            const double s = dom.s_lo + (dom.s_hi - dom.s_lo) * i / std::max(1, grid.n_s - 1);
            for (int j = 0; j < grid.n_t; ++j) {
                const double t = dom.t_lo + (dom.t_hi - dom.t_lo) * j / std::max(1, grid.n_t - 1);
                rep.n_points += 1;
                try {
                    const ChartJet2 jet = fam.chart->jets(s, t);
                    const double r = stationarity_residual(jet, alpha);
                    std::optional<double> fit;
                    try {
                        fit = fit_alpha(jet);
                    } catch (const IndeterminateAlpha&) {
                        rep.n_indeterminate += 1;
                    }
                    consume(r, fit);
                } catch (const OnConeError&) {
                    detail::bump(rep.exclusions, "cone-band");
                } catch (const DegenerateMetric&) {
                    detail::bump(rep.exclusions, "degenerate-metric");
                }
            }
        }
    } else if (fam.graph) {
        const GraphEval& g = *fam.graph;
        rep.n_s = grid.n_axis;
        rep.n_t = grid.n_axis;
        for (const auto& q : detail::box_grid(g.lo, g.hi, grid.n_axis)) {
            rep.n_points += 1;
            try {
                const GraphJet jet = g.jet(q);
                const double r = graph_residual(jet, q, alpha, g.kind);
                std::optional<double> fit;
                try {
                    fit = graph_fit_alpha(jet, q, g.kind);
                } catch (const IndeterminateAlpha&) {
                    rep.n_indeterminate += 1;
                }
                consume(r, fit);
            } catch (const OnConeError&) {
                detail::bump(rep.exclusions, "cone-band");
            } catch (const WrongCausalType&) {
                detail::bump(rep.exclusions, "wrong-causal-type");
            }
        }
    } else {
        throw InvalidArgument("residual_scan: family has neither chart nor graph evaluator");
    }

    rep.mean_abs_residual = rep.n_evaluated ? sum_abs / rep.n_evaluated : 0.0;
    rep.fitted_alpha_mean = fits.mean();
    rep.fitted_alpha_std = fits.stddev();
    const int excluded = detail::total(rep.exclusions);
    rep.pass = rep.n_evaluated > 0 && rep.max_abs_residual <= tol &&
               excluded < rep.n_points / 5;
    return rep;
}

// --------------------------------------------------------------------------
// Inversion transport.
// --------------------------------------------------------------------------

/// Principal curvatures kappa_i = eps * eig(I^{-1} II); empty when complex.
inline std::optional<std::array<double, 2>> principal_curvatures(const FundamentalForms& ff) {
    const double tr = (ff.e * ff.G - 2.0 * ff.f * ff.F + ff.g * ff.E) / ff.W;
    const double det = (ff.e * ff.g - ff.f * ff.f) / ff.W;
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) return std::nullopt;
    const double root = std::sqrt(disc);
    const double l1 = 0.5 * (tr - root), l2 = 0.5 * (tr + root);
    return std::array<double, 2>{ff.eps_normal * l1, ff.eps_normal * l2};
}

/// Reference quadric <y - p0, y - p0> = rhs for image-family identification.
struct ImplicitQuadric {
    MVec p0;
    double rhs = -1.0;
    std::string label;
};

struct TransportRegionStats {
    ConeRegion region = ConeRegion::CMinus;
    int count = 0;
    double alpha_mean = 0.0;
    double alpha_std = 0.0;
    int indeterminate = 0;
    double stated_prediction = 0.0;
    double flipped_prediction = 0.0;
    std::string matched_variant;  // stated / sign-flipped / other-region rule / none
};

struct TransportReport {
    std::string family;
    int n = 2;
    bool alpha_known = false;
    double source_alpha = 0.0;
    std::vector<TransportRegionStats> regions;
    double max_hv_discrepancy = 0.0;
    double max_remark_discrepancy = 0.0;
    int remark_complex_points = 0;
    bool discrepancy_flag = false;   // hv or remark relation fails beyond tolerance
    double involution_max_err = 0.0;
    double conformality_max_err = 0.0;
    double image_defect_max = 0.0;   // vs reference quadric, when given
    std::string reference_label;
    int excluded = 0;
    double fd_step = 1e-5;
};

struct TransportOptions {
    int n_s = 24;
    int n_t = 24;
    double fd_step = 1e-5;
    double match_tol = 1e-6;
    double discrepancy_tol = 1e-6;
    std::optional<Rect> domain;  // overrides the chart domain
    std::optional<ImplicitQuadric> reference;
};

namespace detail {

struct RegionAccum {
    Welford fits;
    int count = 0;
    int indeterminate = 0;
};

inline std::string match_variant(ConeRegion region, int n, double alpha, double mean,
                                 double tol) {
    const double stated = region == ConeRegion::CPlus ? -(2.0 * n + alpha) : 2.0 * n - alpha;
    const double cross = region == ConeRegion::CPlus ? 2.0 * n - alpha : -(2.0 * n + alpha);
    const struct {
        const char* label;
        double value;
    } candidates[] = {{"stated", stated},
                      {"sign-flipped", -stated},
                      {"other-region rule", cross},
                      {"other-region rule, sign-flipped", -cross}};
    for (const auto& c : candidates)
        if (std::fabs(mean - c.value) <= tol * (1.0 + std::fabs(c.value))) return c.label;
    return "none";
}

} // namespace detail

/**
 * Push a chart through the inversion: positions and first derivatives exactly,
 * second derivatives by central differences of the first-order pushforwards.
 * Refits alpha on the image and tests the transport law, the displayed
 * mean-curvature relation and the principal-curvature relation as claims,
 * reporting signed/maximal discrepancies instead of assuming them.
 */
inline TransportReport inversion_transport(const Family& fam,
                                           const TransportOptions& opt = {}) {
    if (!fam.chart)
        throw InvalidArgument("inversion_transport: family has no dim-3 chart");
    const SurfaceChart& chart = *fam.chart;
    const Rect dom = opt.domain.value_or(chart.domain);
    const int n = fam.spec.n;
    const double h = opt.fd_step;

    TransportReport rep;
    rep.family = fam.spec.id;
    rep.n = n;
    rep.alpha_known = !fam.spec.alpha_any;
    rep.source_alpha = fam.spec.claimed_alpha;
    rep.fd_step = h;
    if (opt.reference) rep.reference_label = opt.reference->label;

    detail::RegionAccum plus, minus;

    auto push1 = [&](double s, double t) {
        // First-order pushforward of both tangent vectors at (s,t).
        const ChartJet2 j = chart.jets(s, t);
        struct P1 {
            MVec Ys, Yt;
        };
        return P1{inversion_differential(j.X, j.Xs), inversion_differential(j.X, j.Xt)};
    };

    for (int i = 0; i < opt.n_s; ++i) {
        const double s = dom.s_lo + (dom.s_hi - dom.s_lo) * i / std::max(1, opt.n_s - 1);
        for (int jdx = 0; jdx < opt.n_t; ++jdx) {
            const double t = dom.t_lo + (dom.t_hi - dom.t_lo) * jdx / std::max(1, opt.n_t - 1);
            try {
                const ChartJet2 src = chart.jets(s, t);
                if (in_cone_band(src.X)) {
                    ++rep.excluded;
                    continue;
                }
                const FundamentalForms sf = fundamental_forms(src);
                const double H_src = mean_curvature(sf);
                const double hh = mink_dot(sf.N, src.X);
                const double pp = mink_dot(src.X, src.X);
                const ConeRegion region = cone_region(src.X);

                // Image jet.
                ChartJet2 img;
                img.X = inversion(src.X);
                img.Xs = inversion_differential(src.X, src.Xs);
                img.Xt = inversion_differential(src.X, src.Xt);
                const auto sp = push1(s + h, t), sm = push1(s - h, t);
                const auto tp = push1(s, t + h), tm = push1(s, t - h);
                img.Xss = (sp.Ys - sm.Ys) * (1.0 / (2.0 * h));
                img.Xst = (tp.Ys - tm.Ys) * (1.0 / (2.0 * h));
                img.Xtt = (tp.Yt - tm.Yt) * (1.0 / (2.0 * h));
                if (in_cone_band(img.X)) {
                    ++rep.excluded;
                    continue;
                }

                // Involution and conformality spot checks at this point.
                const MVec back = inversion(img.X);
                rep.involution_max_err = std::max(
                    rep.involution_max_err,
                    (back - src.X).euclid_norm() / (1.0 + src.X.euclid_norm()));
                const double lhs_conf = mink_dot(img.Xs, img.Xs);
                const double rhs_conf = mink_dot(src.Xs, src.Xs) / (pp * pp);
                rep.conformality_max_err = std::max(
                    rep.conformality_max_err,
                    std::fabs(lhs_conf - rhs_conf) / (1.0 + std::fabs(rhs_conf)));

                FundamentalForms ifms = fundamental_forms(img);
                // Align the image orientation with the pushforward normal.
                const MVec n_push = sf.N - src.X * (2.0 * hh / pp);
                const double dot = mink_dot(ifms.N, n_push);
                const bool flip = dot * sf.eps_normal < 0.0;
                const double H_img =
                    (flip ? -1.0 : 1.0) * mean_curvature(ifms);

                // Fitted alpha on the image (orientation invariant).
                detail::RegionAccum& acc = region == ConeRegion::CPlus ? plus : minus;
                acc.count += 1;
                try {
                    acc.fits.add(fit_alpha(img));
                } catch (const IndeterminateAlpha&) {
                    acc.indeterminate += 1;
                }

                // Displayed mean-curvature transport relation, as a claim.
                const double hv_lhs = H_img / (pp * pp * pp * pp);
                const double hv_rhs = H_src / (pp * pp) + 2.0 * n * hh / (pp * pp * pp * pp);
                rep.max_hv_discrepancy =
                    std::max(rep.max_hv_discrepancy, std::fabs(hv_lhs - hv_rhs));

                // Principal-curvature relation (kappa_i)_phi = <p,p> kappa_i + 2h.
                const auto ks = principal_curvatures(sf);
                auto ki = principal_curvatures(ifms);
                if (ks && ki) {
                    if (flip) ki = std::array<double, 2>{-(*ki)[1], -(*ki)[0]};
                    std::array<double, 2> pred{pp * (*ks)[0] + 2.0 * hh,
                                               pp * (*ks)[1] + 2.0 * hh};
                    if (pred[0] > pred[1]) std::swap(pred[0], pred[1]);
                    std::array<double, 2> got = *ki;
                    if (got[0] > got[1]) std::swap(got[0], got[1]);
                    const double d = std::max(std::fabs(got[0] - pred[0]),
                                              std::fabs(got[1] - pred[1]));
                    rep.max_remark_discrepancy = std::max(rep.max_remark_discrepancy, d);
                } else {
                    rep.remark_complex_points += 1;
                }

                if (opt.reference) {
                    const MVec d = img.X - opt.reference->p0;
                    rep.image_defect_max =
                        std::max(rep.image_defect_max,
                                 std::fabs(mink_dot(d, d) - opt.reference->rhs));
                }
            } catch (const OnConeError&) {
                ++rep.excluded;
            } catch (const DegenerateMetric&) {
                ++rep.excluded;
            }
        }
    }

    auto finish = [&](ConeRegion region, const detail::RegionAccum& acc) {
        if (acc.count == 0) return;
        TransportRegionStats st;
        st.region = region;
        st.count = acc.count;
        st.indeterminate = acc.indeterminate;
        st.alpha_mean = acc.fits.mean();
        st.alpha_std = acc.fits.stddev();
        if (rep.alpha_known) {
            const double a = rep.source_alpha;
            st.stated_prediction =
                region == ConeRegion::CPlus ? -(2.0 * n + a) : 2.0 * n - a;
            st.flipped_prediction = -st.stated_prediction;
            st.matched_variant = acc.indeterminate == acc.count
                                     ? "indeterminate"
                                     : detail::match_variant(region, n, a, st.alpha_mean,
                                                             opt.match_tol);
        } else {
            st.matched_variant = "source alpha arbitrary";
        }
        rep.regions.push_back(st);
    };
    finish(ConeRegion::CPlus, plus);
    finish(ConeRegion::CMinus, minus);

    rep.discrepancy_flag = rep.max_hv_discrepancy > opt.discrepancy_tol ||
                           rep.max_remark_discrepancy > opt.discrepancy_tol;
    return rep;
}

// --------------------------------------------------------------------------
// ODE branch explorer for the six contradiction cases.
// --------------------------------------------------------------------------

/**
 * One sub-case of the non-lightlike classification proof: mu = <w',w'>,
 * k = alpha*beta, and the four integration constants of the closed-form
 * solution pair (b, a).
 */
struct OdeBranchSpec {
    int mu = 1;
    double k = 1.0;
    std::array<double, 4> c{1.0, 0.0, 0.0, 0.0};

    char case_label() const {
        if (mu == 1) {
            if (k == 1.0) return 'a';
            if (k > 0.0) return 'b';
            if (k < 0.0) return 'c';
        } else if (mu == -1) {
            if (k == 1.0) return 'd';
            if (k > 0.0) return 'e';
            if (k < 0.0) return 'f';
        }
        throw InvalidArgument("OdeBranchSpec: (mu,k) outside the six proof cases");
    }
};

struct BranchReport {
    char case_label = '?';
    int mu = 1;
    double k = 1.0;
    std::array<double, 4> c{};
    double sup_ab_residual = 0.0;   // sup |2a'b + bb' - ab'|
    double obstruction = 0.0;       // norm of the named obstruction coefficients
    std::vector<double> obstruction_coeffs;  // the signed coefficients themselves
    std::string obstruction_name;
    double ode1_residual = 0.0;     // sup |b'' + k mu b|
    double amub_residual = 0.0;     // sup |a'' + mu a - mu b''|
    bool degenerate_plane = false;  // b == 0 branch
};

namespace detail {

struct BA {
    Jet3 b, a;
};

/// Closed-form (b, a) of the proof case at s, via jet arithmetic.
inline BA branch_solution(const OdeBranchSpec& sp, double s) {
    const Jet3 js = Jet3::variable(s);
    const double c1 = sp.c[0], c2 = sp.c[1], c3 = sp.c[2], c4 = sp.c[3];
    const double k = sp.k;
    BA out;
    if (sp.mu == 1 && k == 1.0) {
        out.b = cos(js) * c1 + sin(js) * c2;
        out.a = (cos(js) * (js * c2 + (2.0 * c3 - c1)) + sin(js) * (js * (-c1) + 2.0 * c4)) * 0.5;
    } else if (sp.mu == 1 && k > 0.0) {
        const double m = std::sqrt(k);
        const Jet3 bh = cos(js * m) * c1 + sin(js * m) * c2;
        out.b = bh;
        out.a = bh * (k / (k - 1.0)) + cos(js) * c3 + sin(js) * c4;
    } else if (sp.mu == 1 && k < 0.0) {
        const double m = std::sqrt(-k);
        const Jet3 bh = exp(js * m) * c1 + exp(js * (-m)) * c2;
        out.b = bh;
        out.a = bh * (k / (k - 1.0)) + cos(js) * c3 + sin(js) * c4;
    } else if (sp.mu == -1 && k == 1.0) {
        out.b = exp(js) * c1 + exp(-js) * c2;
        out.a = exp(js) * c3 + exp(-js) * c4 + js * exp(js) * (-0.5 * c1) +
                js * exp(-js) * (0.5 * c2);
    } else if (sp.mu == -1 && k > 0.0) {
        const double m = std::sqrt(k);
        const Jet3 bh = exp(js * m) * c1 + exp(js * (-m)) * c2;
        out.b = bh;
        out.a = exp(js) * c3 + exp(-js) * c4 - bh * (k / (k - 1.0));
    } else {
        // mu = -1, k < 0. The particular solution must solve a'' - a = -k b;
        // that fixes the coefficient to k/(1-k).
        const double m = std::sqrt(-k);
        const Jet3 bh = cos(js * m) * c1 + sin(js * m) * c2;
        out.b = bh;
        out.a = exp(js) * c3 + exp(-js) * c4 + bh * (k / (1.0 - k));
    }
    return out;
}

/// Least squares via modified Gram-Schmidt; returns coefficients.
inline std::vector<double> lstsq(const std::vector<std::vector<double>>& cols,
                                 std::vector<double> rhs) {
    const std::size_t m = cols.size();
    const std::size_t rows = rhs.size();
    std::vector<std::vector<double>> q = cols;
    std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double d = 0.0;
            for (std::size_t t = 0; t < rows; ++t) d += q[i][t] * q[j][t];
            r[i][j] = d;
            for (std::size_t t = 0; t < rows; ++t) q[j][t] -= d * q[i][t];
        }
        double nrm = 0.0;
        for (std::size_t t = 0; t < rows; ++t) nrm += q[j][t] * q[j][t];
        nrm = std::sqrt(nrm);
        if (nrm <= 1e-300) throw InvalidArgument("lstsq: dependent basis column");
        r[j][j] = nrm;
        for (std::size_t t = 0; t < rows; ++t) q[j][t] /= nrm;
    }
    std::vector<double> qtb(m, 0.0);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t t = 0; t < rows; ++t) qtb[j] += q[j][t] * rhs[t];
    std::vector<double> x(m, 0.0);
    for (std::size_t j = m; j-- > 0;) {
        double acc = qtb[j];
        for (std::size_t i = j + 1; i < m; ++i) acc -= r[j][i] * x[i];
        x[j] = acc / r[j][j];
    }
    return x;
}

struct BasisSet {
    std::vector<std::function<double(double)>> fns;
    std::vector<int> obstruction_idx;
    std::string obstruction_name;
};

inline BasisSet branch_basis(const OdeBranchSpec& sp) {
    BasisSet bs;
    const double k = sp.k;
    const char cl = sp.case_label();
    auto F = [&](std::function<double(double)> f) { bs.fns.push_back(std::move(f)); };
    switch (cl) {
        case 'a':
            F([](double s) { return std::cos(s) * std::cos(s); });
            F([](double s) { return std::sin(s) * std::cos(s); });
            F([](double s) { return std::sin(s) * std::sin(s); });
            F([](double s) { return s * std::cos(s) * std::cos(s); });
            F([](double s) { return s * std::sin(s) * std::cos(s); });
            F([](double s) { return s * std::sin(s) * std::sin(s); });
            bs.obstruction_idx = {3};
            bs.obstruction_name = "coefficient of s cos^2 s";
            break;
        case 'b': {
            const double m = std::sqrt(k);
            F([](double) { return 1.0; });
            F([m](double s) { return std::sin(2.0 * m * s); });
            F([m](double s) { return std::cos(2.0 * m * s); });
            F([m](double s) { return std::sin((m + 1.0) * s); });
            F([m](double s) { return std::cos((m + 1.0) * s); });
            F([m](double s) { return std::sin((m - 1.0) * s); });
            F([m](double s) { return std::cos((m - 1.0) * s); });
            bs.obstruction_idx = {1, 2};
            bs.obstruction_name = "coefficients of sin(2 sqrt(k) s), cos(2 sqrt(k) s)";
            break;
        }
        case 'c': {
            const double m = std::sqrt(-k);
            F([](double) { return 1.0; });
            F([m](double s) { return std::exp(2.0 * m * s); });
            F([m](double s) { return std::exp(-2.0 * m * s); });
            F([m](double s) { return std::exp(m * s) * std::cos(s); });
            F([m](double s) { return std::exp(m * s) * std::sin(s); });
            F([m](double s) { return std::exp(-m * s) * std::cos(s); });
            F([m](double s) { return std::exp(-m * s) * std::sin(s); });
            bs.obstruction_idx = {1, 2};
            bs.obstruction_name = "coefficients of e^{2 sqrt(-k) s}, e^{-2 sqrt(-k) s}";
            break;
        }
        case 'd':
            F([](double) { return 1.0; });
            F([](double s) { return s; });
            F([](double s) { return std::exp(2.0 * s); });
            F([](double s) { return s * std::exp(2.0 * s); });
            F([](double s) { return std::exp(-2.0 * s); });
            F([](double s) { return s * std::exp(-2.0 * s); });
            bs.obstruction_idx = {3, 5};
            bs.obstruction_name = "coefficients of s e^{2s}, s e^{-2s}";
            break;
        case 'e': {
            const double m = std::sqrt(k);
            F([](double) { return 1.0; });
            F([m](double s) { return std::exp((1.0 + m) * s); });
            F([m](double s) { return std::exp((1.0 - m) * s); });
            F([m](double s) { return std::exp((m - 1.0) * s); });
            F([m](double s) { return std::exp(-(1.0 + m) * s); });
            F([m](double s) { return std::exp(2.0 * m * s); });
            F([m](double s) { return std::exp(-2.0 * m * s); });
            bs.obstruction_idx = {5, 6};
            bs.obstruction_name = "coefficients of e^{2 sqrt(k) s}, e^{-2 sqrt(k) s}";
            break;
        }
        case 'f': {
            const double m = std::sqrt(-k);
            F([](double) { return 1.0; });
            F([m](double s) { return std::cos(2.0 * m * s); });
            F([m](double s) { return std::sin(2.0 * m * s); });
            F([m](double s) { return std::exp(s) * std::cos(m * s); });
            F([m](double s) { return std::exp(s) * std::sin(m * s); });
            F([m](double s) { return std::exp(-s) * std::cos(m * s); });
            F([m](double s) { return std::exp(-s) * std::sin(m * s); });
            bs.obstruction_idx = {1, 2};
            bs.obstruction_name = "purely trigonometric coefficients";
            break;
        }
        default: throw InvalidArgument("branch_basis: bad case");
    }
    return bs;
}

} // namespace detail

/**
 * Evaluate the proof's closed-form (b, a) for the sub-case, check the two
 * ODEs they solve, and measure the third compatibility equation
 * 2a'b + bb' - ab' = 0 together with the projection onto the obstructing
 * basis functions named by the proof.
 */
inline BranchReport ode_branch_explore(const OdeBranchSpec& sp,
                                       const std::vector<double>& s_grid) {
    BranchReport rep;
    rep.case_label = sp.case_label();
    rep.mu = sp.mu;
    rep.k = sp.k;
    rep.c = sp.c;
    if (s_grid.size() < 16)
        throw InvalidArgument("ode_branch_explore: need at least 16 grid points");

    if (sp.c[0] == 0.0 && sp.c[1] == 0.0 && sp.c[2] == 0.0 && sp.c[3] == 0.0) {
        rep.degenerate_plane = true;  // b = 0, Q = 0: the plane branch
        rep.obstruction_name = detail::branch_basis(sp).obstruction_name;
        return rep;
    }

    std::vector<double> residual(s_grid.size());
    for (std::size_t i = 0; i < s_grid.size(); ++i) {
        const detail::BA ba = detail::branch_solution(sp, s_grid[i]);
        const double R = 2.0 * ba.a.f1 * ba.b.f + ba.b.f * ba.b.f1 - ba.a.f * ba.b.f1;
        residual[i] = R;
        rep.sup_ab_residual = std::max(rep.sup_ab_residual, std::fabs(R));
        rep.ode1_residual =
            std::max(rep.ode1_residual, std::fabs(ba.b.f2 + sp.k * sp.mu * ba.b.f));
        rep.amub_residual = std::max(
            rep.amub_residual, std::fabs(ba.a.f2 + sp.mu * ba.a.f - sp.mu * ba.b.f2));
    }

    const detail::BasisSet bs = detail::branch_basis(sp);
    std::vector<std::vector<double>> cols(bs.fns.size(), std::vector<double>(s_grid.size()));
    for (std::size_t j = 0; j < bs.fns.size(); ++j)
        for (std::size_t i = 0; i < s_grid.size(); ++i) cols[j][i] = bs.fns[j](s_grid[i]);
    const std::vector<double> coef = detail::lstsq(cols, residual);
    double obs2 = 0.0;
    for (int idx : bs.obstruction_idx) {
        obs2 += coef[idx] * coef[idx];
        rep.obstruction_coeffs.push_back(coef[idx]);
    }
    rep.obstruction = std::sqrt(obs2);
    rep.obstruction_name = bs.obstruction_name;
    return rep;
}

// --------------------------------------------------------------------------
// Cylindrical check, maximum-principle scan, rejection-theorem witness.
// --------------------------------------------------------------------------

struct CylindricalReport {
    double max_accel_triple = 0.0;  // sup |(gamma', w, gamma'')|
    double max_pos_triple = 0.0;    // sup |(gamma', w, gamma)|
    bool stationary = false;
    bool vector_plane = false;
};

/// Both triple products must vanish identically for a cylindrical chart to be
/// stationary; the surviving surfaces are vector planes.
inline CylindricalReport cylindrical_check(const RuledChart& chart, int n_s = 65,
                                           double rtol = 1e-8) {
    if (ruling_class(chart) != RulingClass::Cylindrical)
        throw ClassMismatch("cylindrical_check: chart is not cylindrical");
    CylindricalReport rep;
    double scale = 1.0;
    for (double s : chart.s_range.grid(n_s)) {
        const RuledJets j = chart.jets_fn(s);
        rep.max_accel_triple = std::max(rep.max_accel_triple, std::fabs(triple(j.g1, j.w, j.g2)));
        rep.max_pos_triple = std::max(rep.max_pos_triple, std::fabs(triple(j.g1, j.w, j.g)));
        scale = std::max({scale, j.g.euclid_norm2(), j.g1.euclid_norm2(), j.g2.euclid_norm2()});
    }
    rep.stationary = rep.max_accel_triple <= rtol * scale && rep.max_pos_triple <= rtol * scale;
    if (rep.stationary) {
        const auto nrm = planar_through_origin(detail::sample_surface_points(chart, 9, 5));
        rep.vector_plane = nrm.has_value();
    }
    return rep;
}

struct MaxPrincipleRow {
    std::string family;
    bool applicable = false;   // spacelike and contained in C^+
    bool far = false;
    double delta_witness = 0.0;
    double claimed_alpha = 0.0;
    bool alpha_exceeds_n = false;
    bool vacuous = true;
    std::string note;
};

/**
 * Scan the catalog's spacelike C^+ families against the far-from-cone bound:
 * whenever a family's sample grid is far from the cone for some delta, its
 * claimed alpha must exceed n. Families that never separate from the cone
 * satisfy the theorem vacuously. Finite grids only witness non-farness for
 * complete surfaces; compact patches are annotated, not judged.
 */
inline std::vector<MaxPrincipleRow> max_principle_scan(const std::vector<Family>& families,
                                                       const std::vector<double>& delta_grid) {
    std::vector<MaxPrincipleRow> rows;
    for (const Family& fam : families) {
        MaxPrincipleRow row;
        row.family = fam.spec.id;
        row.claimed_alpha = fam.spec.claimed_alpha;
        row.applicable = fam.spec.causal == CausalClass::Spacelike &&
                         fam.spec.region == ConeRegion::CPlus && !fam.spec.alpha_any;
        if (!row.applicable) {
            row.note = "not a spacelike C^+ family";
            rows.push_back(row);
            continue;
        }
        std::vector<MVec> pts;
        if (fam.chart) {
            const Rect d = fam.chart->domain;
            for (int i = 0; i < fam.spec.grid.n_s; ++i)
                for (int j = 0; j < fam.spec.grid.n_t; ++j) {
                    const double s = d.s_lo + (d.s_hi - d.s_lo) * i /
                                                  std::max(1, fam.spec.grid.n_s - 1);
                    const double t = d.t_lo + (d.t_hi - d.t_lo) * j /
                                                  std::max(1, fam.spec.grid.n_t - 1);
                    pts.push_back(fam.chart->jets(s, t).X);
                }
        } else if (fam.graph) {
            for (const auto& q : detail::box_grid(fam.graph->lo, fam.graph->hi,
                                                  fam.spec.grid.n_axis)) {
                const GraphJet gj = fam.graph->jet(q);
                std::vector<double> comp = q;
                comp.push_back(gj.u);
                pts.push_back(MVec(comp));
            }
        }
        for (double delta : delta_grid) {
            if (far_from_cone(pts, delta)) {
                row.far = true;
                row.delta_witness = delta;
                break;
            }
        }
        if (row.far) {
            row.vacuous = false;
            row.alpha_exceeds_n = fam.spec.claimed_alpha > fam.spec.n;
            row.note = "grid is a bounded patch; the bound addresses properly immersed "
                       "complete hypersurfaces";
        } else {
            row.vacuous = true;
            row.note = "sample grid not far from the cone for any tested delta";
        }
        rows.push_back(row);
    }
    return rows;
}

struct WitnessReport {
    double lead_value = 0.0;      // degree-5 leading coefficient at alpha*beta = -7/10
    double a1_lead_value = 0.0;   // degree-3 leading coefficient there (must vanish)
    double degenerate_w = 0.0;    // |EG - F^2| for the m = 0 chart
    Verdict classifier_verdict = Verdict::NotStationary;
    bool pass = false;
};

namespace detail {

/// Normal-form witness chart: w = (1,-s,-s), gamma the proof's cubic family.
inline RuledChart thnli2_normal_form(double m, double ab, double aa, double bb, double cc,
                                     double dd) {
    Curve gamma = [m, ab, aa, bb, cc, dd](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        const Jet3 y = js * js * js * (m * (2.0 * ab - 1.0) / 6.0) + js * js * (aa * ab) +
                       js * cc + Jet3::constant(dd);
        const Jet3 x = js * js * (0.5 * m) + Jet3::constant(bb);
        const Jet3 z = y - js * m - Jet3::constant(aa);
        return {x, y, z};
    };
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {Jet3::constant(1), -js, -js};
    };
    return RuledChart::from_curves(gamma, w, Interval{0.25, 1.25}, Interval{0.2, 1.0});
}

} // namespace detail

/**
 * Mechanical check of the rejection theorem for (w non-lightlike, w'
 * lightlike): at the unique alpha*beta = -7/10 forced by the degree-3
 * coefficient, the degree-5 leading coefficient is nonzero, so the normal
 * form admits no stationary member; an m = 0 base degenerates the metric;
 * and the classifier rejects the witness chart.
 */
inline WitnessReport thnli2_witness_check() {
    WitnessReport rep;
    const double m = 1.0, ab = -0.7;
    rep.lead_value = (std::pow(m, 4) * ab / 6.0) * (8.0 * ab * ab + 10.0 * ab - 1.0);
    rep.a1_lead_value = -(std::pow(m, 3) * ab / 3.0) * (7.0 + 10.0 * ab);

    {
        // m = 0 witness: gamma' becomes lightlike, EG - F^2 = 0.
        Curve gamma = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            const Jet3 y = sin(js);
            return {Jet3::constant(0.2), y, y - Jet3::constant(0.1)};
        };
        Curve w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {Jet3::constant(1), -js, -js};
        };
        const RuledChart degen =
            RuledChart::from_curves(gamma, w, Interval{0.25, 1.25}, Interval{0.2, 1.0});
        double worst = 0.0;
        for (double s : degen.s_range.grid(9)) {
            const ChartJet2 jet = ruled_jet(degen, s, 0.5);
            const double E = mink_dot(jet.Xs, jet.Xs);
            const double F = mink_dot(jet.Xs, jet.Xt);
            const double G = mink_dot(jet.Xt, jet.Xt);
            worst = std::max(worst, std::fabs(E * G - F * F));
        }
        rep.degenerate_w = worst;
    }

    const RuledChart witness = detail::thnli2_normal_form(m, ab, 0.3, 0.2, 0.1, 0.0);
    const ClassificationReport cls = classify_ruled(witness);
    rep.classifier_verdict = cls.verdict;

    rep.pass = std::fabs(rep.lead_value) > 1e-6 && std::fabs(rep.a1_lead_value) <= 1e-12 &&
               rep.degenerate_w <= 1e-12 && cls.verdict == Verdict::NotStationary;
    return rep;
}

} // namespace minkstat
