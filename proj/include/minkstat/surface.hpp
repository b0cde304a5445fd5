#pragma once
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "minkstat/minkowski.hpp"

namespace minkstat {

/// Relative band below which a point counts as lying on the cone:
/// |<X,X>| < kConeBand * (1 + |X|_euclid^2).
inline constexpr double kConeBand = 1e-6;

/// Relative band below which the induced metric counts as degenerate:
/// |EG - F^2| < kMetricBand * (E^2 + F^2 + G^2).
inline constexpr double kMetricBand = 1e-9;

/// Position plus all first and second partials of a chart at one (s,t).
struct ChartJet2 {
    MVec X, Xs, Xt, Xss, Xst, Xtt;

    void require_dim3() const {
        if (X.dim() != 3)
            throw DimensionMismatch("chart operation requires dim = 3");
    }
};

/// Closed parameter rectangle.
struct Rect {
    double s_lo = 0.0, s_hi = 1.0;
    double t_lo = 0.0, t_hi = 1.0;

    bool contains(double s, double t) const {
        return s >= s_lo && s <= s_hi && t >= t_lo && t <= t_hi;
    }
};

/**
 * First and second fundamental form coefficients, unit normal and its sign.
 * Orientation follows N = (Xs x Xt)/sqrt|EG-F^2|, so eps_normal = -sign(EG-F^2):
 * spacelike surfaces carry timelike normals and vice versa.
 */
struct FundamentalForms {
    double E, F, G;
    double e, f, g;
    double W;         // EG - F^2
    MVec N;
    int eps_normal;   // <N,N>
};

struct StationaritySigns {
    int eps_region;  // +1 on C^+, -1 on C^-
    int eps_normal;  // <N,N>

    int beta() const { return -eps_region * eps_normal; }
};

inline bool in_cone_band(const MVec& X) {
    return std::fabs(mink_dot(X, X)) < kConeBand * (1.0 + X.euclid_norm2());
}

inline FundamentalForms fundamental_forms(const ChartJet2& jet) {
    jet.require_dim3();
    FundamentalForms ff;
    ff.E = mink_dot(jet.Xs, jet.Xs);
    ff.F = mink_dot(jet.Xs, jet.Xt);
    ff.G = mink_dot(jet.Xt, jet.Xt);
    ff.W = ff.E * ff.G - ff.F * ff.F;
    const double scale = ff.E * ff.E + ff.F * ff.F + ff.G * ff.G;
    if (std::fabs(ff.W) <= kMetricBand * scale)
        throw DegenerateMetric("fundamental_forms: |EG-F^2| inside degeneracy band");
    const double root = std::sqrt(std::fabs(ff.W));
    ff.N = lorentz_cross(jet.Xs, jet.Xt) * (1.0 / root);
    ff.eps_normal = ff.W > 0.0 ? -1 : 1;
    ff.e = triple(jet.Xs, jet.Xt, jet.Xss) / root;
    ff.f = triple(jet.Xs, jet.Xt, jet.Xst) / root;
    ff.g = triple(jet.Xs, jet.Xt, jet.Xtt) / root;
    return ff;
}

/// Trace-convention mean curvature (sum of principal curvatures).
inline double mean_curvature(const FundamentalForms& ff) {
    return ff.eps_normal * (ff.e * ff.G - 2.0 * ff.f * ff.F + ff.g * ff.E) / ff.W;
}

inline double mean_curvature(const ChartJet2& jet) {
    return mean_curvature(fundamental_forms(jet));
}

/**
 * H + alpha <N,X> / |<X,X>|. Vanishes at every point iff the chart is
 * alpha-stationary. Flipping the normal negates both terms, so the zero set
 * is orientation-independent.
 */
inline double stationarity_residual(const ChartJet2& jet, double alpha) {
    if (in_cone_band(jet.X))
        throw OnConeError("stationarity_residual: chart point inside cone band");
    const FundamentalForms ff = fundamental_forms(jet);
    const double H = mean_curvature(ff);
    return H + alpha * mink_dot(ff.N, jet.X) / std::fabs(mink_dot(jet.X, jet.X));
}

/// alpha* = -H |<X,X>| / <N,X>; the unique alpha with zero residual at this jet.
inline double fit_alpha(const ChartJet2& jet) {
    if (in_cone_band(jet.X))
        throw OnConeError("fit_alpha: chart point inside cone band");
    const FundamentalForms ff = fundamental_forms(jet);
    const double h = mink_dot(ff.N, jet.X);
    if (std::fabs(h) <= 1e-8 * (1.0 + jet.X.euclid_norm()))
        throw IndeterminateAlpha("fit_alpha: <N,X> ~ 0, every alpha is stationary here");
    return -mean_curvature(ff) * std::fabs(mink_dot(jet.X, jet.X)) / h;
}

/**
 * Build a second-order jet from a position-only evaluator by central
 * differences; error O(h^2) on C^3 charts.
 */
inline ChartJet2 jets_from_position(const std::function<MVec(double, double)>& pos,
                                    double s, double t, double h = 1e-4,
                                    const std::optional<Rect>& domain = std::nullopt) {
    if (h <= 0.0) throw InvalidArgument("jets_from_position: h must be > 0");
    if (domain && !domain->contains(s, t))
        throw DomainError("jets_from_position: (s,t) outside chart domain");
    const MVec c = pos(s, t);
    const MVec sp = pos(s + h, t), sm = pos(s - h, t);
    const MVec tp = pos(s, t + h), tm = pos(s, t - h);
    const MVec pp = pos(s + h, t + h), pm = pos(s + h, t - h);
    const MVec mp = pos(s - h, t + h), mm = pos(s - h, t - h);
    ChartJet2 jet;
    jet.X = c;
    jet.Xs = (sp - sm) * (1.0 / (2.0 * h));
    jet.Xt = (tp - tm) * (1.0 / (2.0 * h));
    jet.Xss = (sp - c * 2.0 + sm) * (1.0 / (h * h));
    jet.Xtt = (tp - c * 2.0 + tm) * (1.0 / (h * h));
    jet.Xst = (pp - pm - mp + mm) * (1.0 / (4.0 * h * h));
    return jet;
}

/**
 * Parametrized surface patch: jet evaluator plus parameter rectangle.
 * Evaluators must be reentrant; charts are freely copyable values.
 */
struct SurfaceChart {
    std::function<ChartJet2(double, double)> jets;
    Rect domain;

    ChartJet2 at(double s, double t) const {
        if (!domain.contains(s, t))
            throw DomainError("SurfaceChart: (s,t) outside domain");
        return jets(s, t);
    }

    static SurfaceChart analytic(std::function<ChartJet2(double, double)> fn, Rect dom) {
        return SurfaceChart{std::move(fn), dom};
    }

    static SurfaceChart from_positions(std::function<MVec(double, double)> pos, Rect dom,
                                       double h = 1e-4) {
        auto p = std::move(pos);
        return SurfaceChart{
            [p, h](double s, double t) { return jets_from_position(p, s, t, h); }, dom};
    }
};

// --------------------------------------------------------------------------
// Graphs x_{n+1} = u(q) over the horizontal hyperplane, general n.
// --------------------------------------------------------------------------

enum class GraphKind { Spacelike, Timelike };

/// Value, gradient and Hessian of u at one base point q.
struct GraphJet {
    double u;
    std::vector<double> du;               // size n
    std::vector<std::vector<double>> d2u; // n x n, symmetric
};

/// Derived pointwise quantities of the graph (q, u(q)).
struct GraphPoint {
    double H;       // mean curvature for the kind's standard orientation
    double NX;      // <N, X>
    double XX;      // <X, X> = |q|^2 - u^2
    GraphKind kind;
};

inline GraphPoint graph_point(const GraphJet& jet, const std::vector<double>& q,
                              GraphKind kind) {
    const std::size_t n = q.size();
    if (jet.du.size() != n || jet.d2u.size() != n)
        throw DimensionMismatch("graph_point: jet/base dimension mismatch");
    double du2 = 0.0, qq = 0.0, qdu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        du2 += jet.du[i] * jet.du[i];
        qq += q[i] * q[i];
        qdu += q[i] * jet.du[i];
    }
    double lap = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        lap += jet.d2u[i][i];
        for (std::size_t j = 0; j < n; ++j) quad += jet.du[i] * jet.du[j] * jet.d2u[i][j];
    }
    GraphPoint out;
    out.kind = kind;
    out.XX = qq - jet.u * jet.u;
    if (kind == GraphKind::Spacelike) {
        if (du2 >= 1.0)
            throw WrongCausalType("graph_point: |Du|^2 >= 1 on a spacelike graph");
        const double Wr = std::sqrt(1.0 - du2);
        // H = div(Du / sqrt(1-|Du|^2)) expanded; orientation N = (Du,1)/W.
        out.H = lap / Wr + quad / (Wr * Wr * Wr);
        out.NX = (qdu - jet.u) / Wr;
    } else {
        if (du2 <= 1.0)
            throw WrongCausalType("graph_point: |Du|^2 <= 1 on a timelike graph");
        const double Vr = std::sqrt(du2 - 1.0);
        // H = div(Du / sqrt(|Du|^2-1)); orientation N = (-Du,-1)/V.
        out.H = lap / Vr - quad / (Vr * Vr * Vr);
        out.NX = -(qdu - jet.u) / Vr;
    }
    return out;
}

/**
 * Euler-Lagrange residual of the weighted-area equation for a graph,
 * normalized as H + alpha <N,X>/|<X,X>|, matching stationarity_residual.
 */
inline double graph_residual(const GraphJet& jet, const std::vector<double>& q, double alpha,
                             GraphKind kind) {
    const GraphPoint gp = graph_point(jet, q, kind);
    double x2 = 0.0;
    for (double qi : q) x2 += qi * qi;
    if (std::fabs(gp.XX) < kConeBand * (1.0 + x2 + jet.u * jet.u))
        throw OnConeError("graph_residual: graph point inside cone band");
    return gp.H + alpha * gp.NX / std::fabs(gp.XX);
}

inline double graph_fit_alpha(const GraphJet& jet, const std::vector<double>& q,
                              GraphKind kind) {
    const GraphPoint gp = graph_point(jet, q, kind);
    double x2 = jet.u * jet.u;
    for (double qi : q) x2 += qi * qi;
    if (std::fabs(gp.XX) < kConeBand * (1.0 + x2))
        throw OnConeError("graph_fit_alpha: graph point inside cone band");
    if (std::fabs(gp.NX) <= 1e-8 * (1.0 + std::sqrt(x2)))
        throw IndeterminateAlpha("graph_fit_alpha: <N,X> ~ 0");
    return -gp.H * std::fabs(gp.XX) / gp.NX;
}

} // namespace minkstat
