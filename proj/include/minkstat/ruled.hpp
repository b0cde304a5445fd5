#pragma once
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minkstat/jets.hpp"
#include "minkstat/surface.hpp"

namespace minkstat {

/// Probe abscissae for coefficient extraction, scaled onto the chart t-range.
inline constexpr std::array<double, 6> kProbeNodes = {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5};

struct Interval {
    double lo = 0.0, hi = 1.0;

    double mid() const { return 0.5 * (lo + hi); }
    double len() const { return hi - lo; }

    bool contains(double x) const { return x >= lo && x <= hi; }

    std::vector<double> grid(int n) const {
        if (n < 1) throw InvalidArgument("Interval::grid: n must be >= 1");
        std::vector<double> xs(n);
        if (n == 1) {
            xs[0] = mid();
            return xs;
        }
        for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
        return xs;
    }
};

/// Base-curve and ruling jets of X(s,t) = gamma(s) + t w(s) at one s.
struct RuledJets {
    MVec g, g1, g2;  // gamma, gamma', gamma''
    MVec w, w1, w2;  // w, w', w''
};

/**
 * Ruled chart X(s,t) = gamma(s) + t w(s). Carries the base and ruling as
 * 3-jet curves; jets_fn is the derived per-s evaluator chart operations use.
 */
struct RuledChart {
    Curve gamma;
    Curve w;
    std::function<RuledJets(double)> jets_fn;
    Interval s_range{0.0, 1.0};
    Interval t_range{-1.0, 1.0};

    static RuledChart from_curves(Curve gamma, Curve w, Interval s_range, Interval t_range) {
        RuledChart c;
        c.gamma = std::move(gamma);
        c.w = std::move(w);
        auto g = c.gamma;
        auto r = c.w;
        c.jets_fn = [g, r](double s) -> RuledJets {
            const CurveJet gj = eval_curve(g, s);
            const CurveJet wj = eval_curve(r, s);
            if (wj.p.is_zero())
                throw InvalidArgument("RuledChart: ruling w(s) must not vanish");
            return {gj.p, gj.d1, gj.d2, wj.p, wj.d1, wj.d2};
        };
        c.s_range = s_range;
        c.t_range = t_range;
        return c;
    }

    /// Build from a raw jet evaluator; curve 3-jets get their third derivative
    /// from finite differences of the second.
    static RuledChart from_jets(std::function<RuledJets(double)> jets, Interval s_range,
                                Interval t_range, double h = 1e-4) {
        RuledChart c;
        c.jets_fn = std::move(jets);
        auto jf = c.jets_fn;
        c.gamma = [jf, h](double s) -> Vec3J {
            const RuledJets j0 = jf(s), jp = jf(s + h), jm = jf(s - h);
            Vec3J out;
            for (int i = 0; i < 3; ++i)
                out[i] = Jet3{j0.g[i], j0.g1[i], j0.g2[i], (jp.g2[i] - jm.g2[i]) / (2.0 * h)};
            return out;
        };
        c.w = [jf, h](double s) -> Vec3J {
            const RuledJets j0 = jf(s), jp = jf(s + h), jm = jf(s - h);
            Vec3J out;
            for (int i = 0; i < 3; ++i)
                out[i] = Jet3{j0.w[i], j0.w1[i], j0.w2[i], (jp.w2[i] - jm.w2[i]) / (2.0 * h)};
            return out;
        };
        c.s_range = s_range;
        c.t_range = t_range;
        return c;
    }

    RuledJets jets(double s) const {
        if (!s_range.contains(s))
            throw DomainError("RuledChart: s outside base interval");
        return jets_fn(s);
    }
};

/// X = gamma + t w, Xs = gamma' + t w', Xt = w, Xss = gamma'' + t w'', Xst = w', Xtt = 0.
inline ChartJet2 ruled_jet(const RuledJets& rj, double t) {
    ChartJet2 jet;
    jet.X = rj.g + rj.w * t;
    jet.Xs = rj.g1 + rj.w1 * t;
    jet.Xt = rj.w;
    jet.Xss = rj.g2 + rj.w2 * t;
    jet.Xst = rj.w1;
    jet.Xtt = MVec::zero(3);
    return jet;
}

inline ChartJet2 ruled_jet(const RuledChart& chart, double s, double t) {
    return ruled_jet(chart.jets(s), t);
}

inline SurfaceChart as_surface_chart(const RuledChart& chart) {
    return SurfaceChart{
        [chart](double s, double t) { return ruled_jet(chart, s, t); },
        Rect{chart.s_range.lo, chart.s_range.hi, chart.t_range.lo, chart.t_range.hi}};
}

/// H1 = G (Xs,Xt,Xss) - 2F (Xs,Xt,Xst) + E (Xs,Xt,Xtt); polynomial in the jet,
/// equal to eps * H * (EG-F^2) * sqrt|EG-F^2|.
inline double h1(const ChartJet2& jet) {
    jet.require_dim3();
    const double E = mink_dot(jet.Xs, jet.Xs);
    const double F = mink_dot(jet.Xs, jet.Xt);
    const double G = mink_dot(jet.Xt, jet.Xt);
    return G * triple(jet.Xs, jet.Xt, jet.Xss) - 2.0 * F * triple(jet.Xs, jet.Xt, jet.Xst) +
           E * triple(jet.Xs, jet.Xt, jet.Xtt);
}

/**
 * Fully cleared stationarity polynomial value at (s,t):
 *   P = H1 <X,X> - kappa (EG-F^2) (Xs,Xt,X),  kappa = alpha * eps_region * eps_normal.
 * The chart is alpha-stationary on a sign-consistent patch iff P vanishes there.
 */
inline double cleared_value(const ChartJet2& jet, double kappa) {
    const double E = mink_dot(jet.Xs, jet.Xs);
    const double F = mink_dot(jet.Xs, jet.Xt);
    const double G = mink_dot(jet.Xt, jet.Xt);
    const double W = E * G - F * F;
    return h1(jet) * mink_dot(jet.X, jet.X) - kappa * W * triple(jet.Xs, jet.Xt, jet.X);
}

/// Polynomial in t of degree <= 5, stored by coefficient.
struct TPolynomial {
    std::array<double, 6> coeff{};

    double eval(double t) const {
        double acc = 0.0;
        for (int k = 5; k >= 0; --k) acc = acc * t + coeff[k];
        return acc;
    }

    double max_abs() const {
        double m = 0.0;
        for (double c : coeff) m = std::max(m, std::fabs(c));
        return m;
    }
};

namespace detail {

/// Gaussian elimination with partial pivoting for the 6x6 Vandermonde solve.
inline std::array<double, 6> solve6(std::array<std::array<double, 6>, 6> A,
                                    std::array<double, 6> b) {
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        if (A[piv][col] == 0.0)
            throw InvalidArgument("solve6: singular system (repeated probe nodes?)");
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        for (int r = col + 1; r < 6; ++r) {
            const double w = A[r][col] / A[col][col];
            for (int c = col; c < 6; ++c) A[r][c] -= w * A[col][c];
            b[r] -= w * b[col];
        }
    }
    std::array<double, 6> x{};
    for (int r = 5; r >= 0; --r) {
        double acc = b[r];
        for (int c = r + 1; c < 6; ++c) acc -= A[r][c] * x[c];
        x[r] = acc / A[r][r];
    }
    return x;
}

inline std::array<double, 6> probe_ts(const Interval& t_range) {
    std::array<double, 6> ts{};
    const double c = t_range.mid();
    const double scale = t_range.len() / 5.0;
    for (int i = 0; i < 6; ++i) ts[i] = c + kProbeNodes[i] * scale;
    if (scale == 0.0) throw InvalidArgument("probe_ts: degenerate t-range");
    return ts;
}

inline TPolynomial poly_from_values(const std::array<double, 6>& ts,
                                    const std::array<double, 6>& vals) {
    std::array<std::array<double, 6>, 6> V{};
    for (int i = 0; i < 6; ++i) {
        double p = 1.0;
        for (int j = 0; j < 6; ++j) {
            V[i][j] = p;
            p *= ts[i];
        }
    }
    TPolynomial out;
    out.coeff = solve6(V, vals);
    return out;
}

} // namespace detail

/// eps_normal at a representative t of the chart's range.
inline int ruled_eps_normal(const RuledJets& rj, const Interval& t_range) {
    return fundamental_forms(ruled_jet(rj, t_range.mid())).eps_normal;
}

/**
 * Coefficients of P(s, .) extracted by evaluating P at six probe t-nodes and
 * solving the Vandermonde system; exact for polynomials in t, which P is.
 * Throws DegenerateMetric when a probe node sits in the metric degeneracy band
 * or the metric signature changes across nodes.
 */
inline TPolynomial ruled_stationarity_poly(const RuledChart& chart, double s, double alpha,
                                           int eps_region) {
    const RuledJets rj = chart.jets(s);
    const int eps_n = ruled_eps_normal(rj, chart.t_range);
    const double kappa = alpha * eps_region * eps_n;
    const std::array<double, 6> ts = detail::probe_ts(chart.t_range);
    std::array<double, 6> vals{};
    int sign_seen = 0;
    for (int i = 0; i < 6; ++i) {
        const ChartJet2 jet = ruled_jet(rj, ts[i]);
        const double E = mink_dot(jet.Xs, jet.Xs);
        const double F = mink_dot(jet.Xs, jet.Xt);
        const double G = mink_dot(jet.Xt, jet.Xt);
        const double W = E * G - F * F;
        if (std::fabs(W) <= kMetricBand * (E * E + F * F + G * G))
            throw DegenerateMetric("ruled_stationarity_poly: degenerate metric at probe node");
        const int sgn = W > 0.0 ? 1 : -1;
        if (sign_seen == 0) sign_seen = sgn;
        else if (sign_seen != sgn)
            throw DegenerateMetric("ruled_stationarity_poly: metric signature changes across probe nodes");
        vals[i] = cleared_value(jet, kappa);
    }
    return detail::poly_from_values(ts, vals);
}

enum class RulingClass {
    Cylindrical,
    NonLightlikeW_NonLightlikeWp,
    NonLightlikeW_LightlikeWp,
    LightlikeW,
};

inline const char* to_string(RulingClass c) {
    switch (c) {
        case RulingClass::Cylindrical: return "cylindrical";
        case RulingClass::NonLightlikeW_NonLightlikeWp: return "w,w' non-lightlike";
        case RulingClass::NonLightlikeW_LightlikeWp: return "w non-lightlike, w' lightlike";
        case RulingClass::LightlikeW: return "w lightlike";
    }
    return "?";
}

/**
 * Classify the ruling field on a sample grid: cylindrical when w' vanishes
 * identically; otherwise by the causal classes of w and w'. A causal class
 * that changes along the interval is a hard classification failure.
 */
inline RulingClass ruling_class(const RuledChart& chart, double tol = kCausalTol,
                                int n_samples = 64) {
    const std::vector<double> ss = chart.s_range.grid(n_samples);
    double max_w1 = 0.0, max_w = 0.0;
    for (double s : ss) {
        const RuledJets rj = chart.jets_fn(s);
        max_w1 = std::max(max_w1, rj.w1.euclid_norm());
        max_w = std::max(max_w, rj.w.euclid_norm());
    }
    if (max_w1 <= tol * (1.0 + max_w)) return RulingClass::Cylindrical;

    int w_class = -1, wp_class = -1;
    for (double s : ss) {
        const RuledJets rj = chart.jets_fn(s);
        const CausalClass cw = causal_class(rj.w, tol);
        if (cw == CausalClass::ZeroVector)
            throw InvalidArgument("ruling_class: w vanishes on the interval");
        const CausalClass cwp = causal_class(rj.w1, tol);
        const int kw = cw == CausalClass::Lightlike ? 1 : 0;
        const int kwp = (cwp == CausalClass::Lightlike || cwp == CausalClass::ZeroVector) ? 1 : 0;
        if (w_class < 0) {
            w_class = kw;
            wp_class = kwp;
        } else if (w_class != kw || wp_class != kwp) {
            throw MixedClass("ruling_class: causal class of w or w' changes along I");
        }
    }
    if (w_class == 1) return RulingClass::LightlikeW;
    return wp_class == 1 ? RulingClass::NonLightlikeW_LightlikeWp
                         : RulingClass::NonLightlikeW_NonLightlikeWp;
}

// --------------------------------------------------------------------------
// Normalizations used by the classification theorems.
// --------------------------------------------------------------------------

namespace detail {

/// Scalar jets of gamma', w as Jet3 with only orders <= 2 meaningful.
struct NormWork {
    Vec3J g, w;  // input 3-jets
};

inline Jet3 comp_shift(const Jet3& j) { return jet_derivative(j); }

inline Vec3J vec_shift(const Vec3J& v) {
    return {comp_shift(v[0]), comp_shift(v[1]), comp_shift(v[2])};
}

} // namespace detail

/**
 * Results of the non-lightlike normalization at each s: jets of the striction
 * base and unit ruling with respect to the unit-speed ruling parameter, plus
 * the scalar invariants of the theorem machinery.
 */
struct NormalizedScalars {
    double Q;        // distribution parameter (gamma', w, w')
    double Qp;       // dQ/dsigma
    double kappa_g;  // geodesic curvature (w'', w', w)
    double a, ap;    // frame coefficient a = mu <gamma, w'> and its derivative
    double b;        // frame coefficient along w x w'
    double c;        // frame coefficient along w, equals -a' when kappa_g = 0
    double F;        // <gamma', w>
};

struct RuledNormalization {
    int delta;  // <w~, w~>
    int mu;     // <w~', w~'> after reparametrization
    RuledChart chart;  // normalized chart (jets w.r.t. the new parameter, indexed by original s)
    std::function<NormalizedScalars(double)> scalars;
};

namespace detail {

struct SigmaJets {
    MVec p, d1, d2;
};

/// Transform s-jets to sigma-jets where dsigma/ds = m: D1 = d1/m,
/// D2 = d2/m^2 - d1 m'/m^3.
inline SigmaJets to_sigma(const MVec& p, const MVec& d1, const MVec& d2, double m, double m1) {
    return {p, d1 * (1.0 / m), d2 * (1.0 / (m * m)) - d1 * (m1 / (m * m * m))};
}

} // namespace detail

/**
 * Normalize a chart of class NonLightlikeW_NonLightlikeWp: rescale w to unit
 * pseudo-norm, shift the base onto the striction curve (u = -<g',w~'>/<w~',w~'>,
 * algebraic, no ODE), and reparametrize so |<w~',w~'>| = 1. The surface is
 * unchanged; jets are reported against the new parameter at the original s.
 */
inline RuledNormalization normalize_nonlightlike(const RuledChart& chart,
                                                 int class_check_samples = 64) {
    if (ruling_class(chart, kCausalTol, class_check_samples) !=
        RulingClass::NonLightlikeW_NonLightlikeWp)
        throw ClassMismatch("normalize_nonlightlike: chart is not of class (w,w' non-lightlike)");

    // Sign of <w,w> must be constant; probe the ends and middle.
    const Curve w = chart.w;
    const Curve gamma = chart.gamma;
    int delta = 0;
    for (double s : chart.s_range.grid(class_check_samples)) {
        const CurveJet wj = eval_curve(w, s);
        const double q = mink_dot(wj.p, wj.p);
        const int sgn = q > 0.0 ? 1 : -1;
        if (delta == 0) delta = sgn;
        else if (delta != sgn)
            throw NonUnitizableRuling("normalize_nonlightlike: <w,w> changes sign on I");
    }
    const int dl = delta;

    // Unit ruling as Jet3 algebra: w~ = w / sqrt(delta <w,w>).
    auto unit_w = [w, dl](double s) -> Vec3J {
        const Vec3J wj = w(s);
        const Jet3 rho = sqrt(mink_dot(wj, wj) * static_cast<double>(dl));
        return {wj[0] / rho, wj[1] / rho, wj[2] / rho};
    };

    // Striction shift u = -<g', w~'> / <w~', w~'>; valid through order 2.
    auto striction_g = [gamma, unit_w](double s) -> Vec3J {
        const Vec3J g = gamma(s);
        const Vec3J wt = unit_w(s);
        const Vec3J g1 = detail::vec_shift(g);
        const Vec3J w1 = detail::vec_shift(wt);
        const Jet3 u = (Jet3::constant(0) - mink_dot(g1, w1)) / mink_dot(w1, w1);
        return g + wt * u;
    };

    int mu = 0;
    {
        const CurveJet wj = eval_curve(unit_w, chart.s_range.mid());
        mu = mink_dot(wj.d1, wj.d1) > 0.0 ? 1 : -1;
    }
    const int m_sign = mu;

    // Per-s normalized jets in the unit-speed parameter sigma, dsigma/ds = m.
    auto norm_jets = [striction_g, unit_w, m_sign](double s) -> RuledJets {
        const CurveJet gt = eval_curve(striction_g, s);
        const CurveJet wt = eval_curve(unit_w, s);
        const double q1 = mink_dot(wt.d1, wt.d1);
        const double m = std::sqrt(m_sign * q1);
        if (!(m > 0.0))
            throw VanishingWPrime("normalize_nonlightlike: |<w~',w~'>| vanishes");
        const double m1 = m_sign * mink_dot(wt.d1, wt.d2) / m;
        const detail::SigmaJets gs = detail::to_sigma(gt.p, gt.d1, gt.d2, m, m1);
        const detail::SigmaJets ws = detail::to_sigma(wt.p, wt.d1, wt.d2, m, m1);
        return {gs.p, gs.d1, gs.d2, ws.p, ws.d1, ws.d2};
    };

    RuledNormalization out;
    out.delta = delta;
    out.mu = mu;
    out.chart = RuledChart::from_jets(norm_jets, chart.s_range, chart.t_range);
    out.scalars = [norm_jets, delta, mu](double s) -> NormalizedScalars {
        const RuledJets j = norm_jets(s);
        NormalizedScalars sc;
        sc.Q = triple(j.g1, j.w, j.w1);
        sc.Qp = triple(j.g2, j.w, j.w1) + triple(j.g1, j.w, j.w2);
        sc.kappa_g = triple(j.w2, j.w1, j.w);
        sc.a = mu * mink_dot(j.g, j.w1);
        // d/dsigma of a; the <g',w'> term drops by the striction condition.
        sc.ap = mu * (mink_dot(j.g1, j.w1) + mink_dot(j.g, j.w2));
        sc.b = -static_cast<double>(delta) * mu * triple(j.w, j.w1, j.g);
        sc.c = delta * mink_dot(j.g, j.w);
        sc.F = mink_dot(j.g1, j.w);
        return sc;
    };
    return out;
}

/**
 * Normalize a chart with lightlike rulings: reparametrize so <w',w'> = 1 and
 * shift the base by u = -<gamma',w'> so that <gamma~',w'> = 0. The ruling is
 * left unscaled (a lightlike field has no unit rescaling).
 */
inline RuledChart normalize_lightlike(const RuledChart& chart, int class_check_samples = 64) {
    if (ruling_class(chart, kCausalTol, class_check_samples) != RulingClass::LightlikeW)
        throw ClassMismatch("normalize_lightlike: chart is not of class (w lightlike)");

    const Curve gamma = chart.gamma;
    const Curve w = chart.w;
    auto striction_g = [gamma, w](double s) -> Vec3J {
        const Vec3J g = gamma(s);
        const Vec3J wj = w(s);
        const Vec3J g1 = detail::vec_shift(g);
        const Vec3J w1 = detail::vec_shift(wj);
        const Jet3 u = (Jet3::constant(0) - mink_dot(g1, w1)) / mink_dot(w1, w1);
        return g + wj * u;
    };

    auto norm_jets = [striction_g, w](double s) -> RuledJets {
        const CurveJet gt = eval_curve(striction_g, s);
        const CurveJet wt = eval_curve(w, s);
        const double q1 = mink_dot(wt.d1, wt.d1);
        if (!(q1 > 0.0))
            throw VanishingWPrime("normalize_lightlike: w' is not spacelike-nonvanishing");
        const double m = std::sqrt(q1);
        const double m1 = mink_dot(wt.d1, wt.d2) / m;
        const detail::SigmaJets gs = detail::to_sigma(gt.p, gt.d1, gt.d2, m, m1);
        const detail::SigmaJets ws = detail::to_sigma(wt.p, wt.d1, wt.d2, m, m1);
        return {gs.p, gs.d1, gs.d2, ws.p, ws.d1, ws.d2};
    };
    return RuledChart::from_jets(norm_jets, chart.s_range, chart.t_range);
}

// --------------------------------------------------------------------------
// Closed-form coefficients from the classification proofs.
// --------------------------------------------------------------------------

/**
 * The five displayed coefficients for the (w, w' non-lightlike) case on a
 * normalized chart:
 *   A0 = Q F <g,g> + ab mu Q^2 (g',w,g)
 *   A1 = 2 F Q <g,w> + delta Q' <g,g> + ab mu Q^2 (w',w,g)
 *   A2 = 2 delta Q' <g,w> + delta Q F - ab delta mu (g',w,g)
 *   A3 = Q' - ab delta mu (w',w,g)
 *   A4 = kappa_g
 * with ab = alpha * beta. Agrees with ruled_stationarity_poly up to an overall
 * sign on normalized charts.
 */
inline std::array<double, 5> thnli_coeffs(const RuledNormalization& norm, double s,
                                          double alpha, int beta) {
    const RuledJets j = norm.chart.jets_fn(s);
    const NormalizedScalars sc = norm.scalars(s);
    const double ab = alpha * beta;
    const double dl = norm.delta, mu = norm.mu;
    const double gg = mink_dot(j.g, j.g);
    const double gw = mink_dot(j.g, j.w);
    const double t_gpg = triple(j.g1, j.w, j.g);
    const double t_wpg = triple(j.w1, j.w, j.g);
    return {sc.Q * sc.F * gg + ab * mu * sc.Q * sc.Q * t_gpg,
            2.0 * sc.F * sc.Q * gw + dl * sc.Qp * gg + ab * mu * sc.Q * sc.Q * t_wpg,
            2.0 * dl * sc.Qp * gw + dl * sc.Q * sc.F - ab * dl * mu * t_gpg,
            sc.Qp - ab * dl * mu * t_wpg,
            sc.kappa_g};
}

/**
 * The two displayed coefficients for the lightlike-ruling case on a
 * normalized chart:
 *   A0 = 2 <g,g> (g',w,w') - alpha eps <g',w> (g',w,g)
 *   A1 = 4 <g,w> (g',w,w') - alpha eps <g',w> (w',w,g)
 */
inline std::array<double, 2> thli_coeffs(const RuledChart& normalized, double s, double alpha,
                                         int eps_region) {
    const RuledJets j = normalized.jets_fn(s);
    const double ae = alpha * eps_region;
    const double gpw = mink_dot(j.g1, j.w);
    const double t_gww = triple(j.g1, j.w, j.w1);
    return {2.0 * mink_dot(j.g, j.g) * t_gww - ae * gpw * triple(j.g1, j.w, j.g),
            4.0 * mink_dot(j.g, j.w) * t_gww - ae * gpw * triple(j.w1, j.w, j.g)};
}

/// <g,g> (w',w,g) - 2 <g,w> (g',w,g); vanishes on the stationary branch (2b).
/// Invariant under the lightlike normalization, so any chart of the class works.
inline double thli_identity(const RuledChart& chart, double s) {
    const RuledJets j = chart.jets_fn(s);
    return mink_dot(j.g, j.g) * triple(j.w1, j.w, j.g) -
           2.0 * mink_dot(j.g, j.w) * triple(j.g1, j.w, j.g);
}

// --------------------------------------------------------------------------
// Alpha fitting and classification.
// --------------------------------------------------------------------------

struct AlphaFit {
    bool indeterminate = false;  // every alpha fits (vector planes)
    double alpha = 0.0;
    double residual = 0.0;  // max |A_n| after the fit
    double scale = 1.0;
    int eps_region = 0;
    int eps_normal = 0;
};

/**
 * Least-squares fit of alpha over all (s, n) coefficient equations, which are
 * linear in kappa = alpha * eps_region * eps_normal:
 *   A_n(s; kappa) = p_n(s) - kappa q_n(s).
 */
inline AlphaFit fit_ruled_alpha(const RuledChart& chart, int n_s = 33) {
    const std::vector<double> ss = chart.s_range.grid(n_s);
    const double t_mid = chart.t_range.mid();

    std::vector<double> ps, qs;
    int eps_region = 0, eps_normal = 0;
    for (double s : ss) {
        const RuledJets rj = chart.jets_fn(s);
        const ChartJet2 mid_jet = ruled_jet(rj, t_mid);
        const ConeRegion reg = cone_region(mid_jet.X);
        if (reg == ConeRegion::OnCone)
            throw OnConeError("fit_ruled_alpha: chart touches the cone band at t mid");
        const int er = region_sign(reg);
        const int en = fundamental_forms(mid_jet).eps_normal;
        if (eps_region == 0) {
            eps_region = er;
            eps_normal = en;
        } else if (eps_region != er || eps_normal != en) {
            throw MixedClass("fit_ruled_alpha: region or normal sign changes across the grid");
        }

        const std::array<double, 6> ts = detail::probe_ts(chart.t_range);
        std::array<double, 6> v0{}, v1{};
        for (int i = 0; i < 6; ++i) {
            const ChartJet2 jet = ruled_jet(rj, ts[i]);
            v0[i] = cleared_value(jet, 0.0);
            v1[i] = cleared_value(jet, 1.0);
        }
        const TPolynomial P0 = detail::poly_from_values(ts, v0);
        const TPolynomial P1 = detail::poly_from_values(ts, v1);
        for (int nn = 0; nn < 6; ++nn) {
            ps.push_back(P0.coeff[nn]);
            qs.push_back(P0.coeff[nn] - P1.coeff[nn]);  // q_n, coefficient of kappa
        }
    }

    double pq = 0.0, qq = 0.0, pmax = 0.0, qmax = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        pq += ps[i] * qs[i];
        qq += qs[i] * qs[i];
        pmax = std::max(pmax, std::fabs(ps[i]));
        qmax = std::max(qmax, std::fabs(qs[i]));
    }

    AlphaFit fit;
    fit.eps_region = eps_region;
    fit.eps_normal = eps_normal;
    if (qmax <= 1e-10 * (1.0 + pmax)) {
        // No alpha-dependence: stationary for every alpha iff p also vanishes.
        fit.indeterminate = true;
        fit.residual = pmax;
        fit.scale = std::max(1.0, pmax);
        return fit;
    }
    const double kappa = pq / qq;
    double rmax = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        rmax = std::max(rmax, std::fabs(ps[i] - kappa * qs[i]));
    fit.alpha = kappa * eps_region * eps_normal;
    fit.residual = rmax;
    fit.scale = std::max({1.0, pmax, std::fabs(kappa) * qmax});
    return fit;
}

/// Best plane through the origin containing all points, if one exists.
inline std::optional<MVec> planar_through_origin(const std::vector<MVec>& points,
                                                 double tol = 1e-8) {
    // Pick the normal as the largest Euclidean cross product over sampled pairs.
    MVec best = MVec::zero(3);
    double best_n2 = 0.0;
    double scale = 0.0;
    for (const MVec& p : points) scale = std::max(scale, p.euclid_norm());
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); j += std::max<std::size_t>(1, points.size() / 16)) {
            const MVec& a = points[i];
            const MVec& b = points[j];
            const MVec cr{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                          a[0] * b[1] - a[1] * b[0]};
            const double n2 = cr.euclid_norm2();
            if (n2 > best_n2) {
                best_n2 = n2;
                best = cr;
            }
        }
    }
    if (best_n2 <= tol * scale * scale) return std::nullopt;  // points nearly collinear
    const MVec n = best * (1.0 / std::sqrt(best_n2));
    for (const MVec& p : points) {
        const double d = p[0] * n[0] + p[1] * n[1] + p[2] * n[2];
        if (std::fabs(d) > tol * (1.0 + p.euclid_norm())) return std::nullopt;
    }
    return n;
}

enum class Verdict { Stationary, NotStationary, VectorPlane };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Stationary: return "stationary";
        case Verdict::NotStationary: return "not-stationary";
        case Verdict::VectorPlane: return "vector-plane";
    }
    return "?";
}

struct ClassificationReport {
    RulingClass ruling;
    Verdict verdict;
    bool indeterminate_alpha = false;
    double alpha = 0.0;        // meaningful when stationary and not indeterminate
    std::string branch;        // matched theorem branch label
    double fit_residual = 0.0;
    double fit_scale = 1.0;
    int eps_region = 0;
    int eps_normal = 0;
    double kappa_g_max = 0.0;  // only for the non-lightlike normalized case
    std::string note;
};

struct ClassifyOptions {
    int n_s = 33;
    double rtol = 1e-6;  // stationary iff fit residual <= rtol * scale
};

namespace detail {

inline std::vector<MVec> sample_surface_points(const RuledChart& chart, int n_s, int n_t) {
    std::vector<MVec> pts;
    for (double s : chart.s_range.grid(n_s))
        for (double t : chart.t_range.grid(n_t)) pts.push_back(ruled_jet(chart, s, t).X);
    return pts;
}

} // namespace detail

/**
 * Aggregate classifier: determines the ruling class, fits alpha from the
 * cleared polynomial and matches the theorem branch. Cylindrical charts are
 * tested with the two triple-product conditions; the (w non-lightlike,
 * w' lightlike) class is rejected unless planar.
 */
inline ClassificationReport classify_ruled(const RuledChart& chart,
                                           const ClassifyOptions& opt = {}) {
    ClassificationReport rep;
    rep.ruling = ruling_class(chart, kCausalTol, opt.n_s);

    const auto planar = planar_through_origin(
        detail::sample_surface_points(chart, std::min(opt.n_s, 17), 5));

    if (rep.ruling == RulingClass::Cylindrical) {
        double m1 = 0.0, m2 = 0.0, scale = 1.0;
        for (double s : chart.s_range.grid(opt.n_s)) {
            const RuledJets j = chart.jets_fn(s);
            m1 = std::max(m1, std::fabs(triple(j.g1, j.w, j.g2)));
            m2 = std::max(m2, std::fabs(triple(j.g1, j.w, j.g)));
            scale = std::max({scale, j.g.euclid_norm2(), j.g1.euclid_norm2()});
        }
        rep.fit_residual = std::max(m1, m2);
        rep.fit_scale = scale;
        if (rep.fit_residual <= opt.rtol * scale && planar) {
            rep.verdict = Verdict::VectorPlane;
            rep.indeterminate_alpha = true;
            rep.branch = "cy";
        } else {
            rep.verdict = Verdict::NotStationary;
            rep.branch = "cy";
            rep.note = "cylindrical triple-product conditions fail";
        }
        return rep;
    }

    if (rep.ruling == RulingClass::NonLightlikeW_LightlikeWp) {
        if (planar) {
            rep.verdict = Verdict::VectorPlane;
            rep.indeterminate_alpha = true;
        } else {
            rep.verdict = Verdict::NotStationary;
            rep.note = "non-planar chart with non-lightlike w and lightlike w'";
        }
        rep.branch = "nli2";
        return rep;
    }

    const AlphaFit fit = fit_ruled_alpha(chart, opt.n_s);
    rep.fit_residual = fit.residual;
    rep.fit_scale = fit.scale;
    rep.eps_region = fit.eps_region;
    rep.eps_normal = fit.eps_normal;

    if (fit.indeterminate) {
        if (fit.residual <= opt.rtol * fit.scale && planar) {
            rep.verdict = Verdict::VectorPlane;
            rep.indeterminate_alpha = true;
            rep.branch = "pr1-1";
        } else {
            rep.verdict = Verdict::NotStationary;
            rep.note = "no alpha-dependence but nonzero residual";
        }
        return rep;
    }

    if (fit.residual > opt.rtol * fit.scale) {
        rep.verdict = Verdict::NotStationary;
        return rep;
    }
    rep.verdict = Verdict::Stationary;
    rep.alpha = fit.alpha;

    if (rep.ruling == RulingClass::LightlikeW) {
        // Branch by the fitted alpha * eps: -2 is the gamma = w' family,
        // -4 splits into the lightlike-line and identity branches.
        const double ae = fit.alpha * fit.eps_region;
        double gg_max = 0.0;
        for (double s : chart.s_range.grid(9)) {
            const RuledJets j = chart.jets_fn(s);
            gg_max = std::max(gg_max, std::fabs(mink_dot(j.g, j.g)));
        }
        if (std::fabs(ae + 2.0) < 1e-3) rep.branch = "th-li-1";
        else if (std::fabs(ae + 4.0) < 1e-3) rep.branch = gg_max <= 1e-8 ? "th-li-2a" : "th-li-2b";
        else rep.branch = "th-li-?";
        return rep;
    }

    // Non-lightlike w and w': normalize for branch diagnostics.
    try {
        const RuledNormalization norm = normalize_nonlightlike(chart, 17);
        double kg = 0.0, f_max = 0.0, gw_max = 0.0;
        for (double s : chart.s_range.grid(17)) {
            const NormalizedScalars sc = norm.scalars(s);
            const RuledJets j = norm.chart.jets_fn(s);
            kg = std::max(kg, std::fabs(sc.kappa_g));
            f_max = std::max(f_max, std::fabs(sc.F));
            gw_max = std::max(gw_max, std::fabs(mink_dot(j.g, j.w)));
        }
        rep.kappa_g_max = kg;
        if (norm.mu == -1) rep.branch = "th-nli-2";
        else if (f_max <= 1e-6) rep.branch = "th-nli-1a";
        else if (gw_max <= 1e-6) rep.branch = "th-nli-1b";
        else rep.branch = "th-nli-?";  // stationary but outside the catalog branches
    } catch (const Error&) {
        rep.branch = "th-nli-?";
    }
    return rep;
}

} // namespace minkstat
