#pragma once
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "minkstat/ruled.hpp"
#include "minkstat/surface.hpp"

namespace minkstat {

/// Grid resolution for a family's default verification sweep.
struct GridSpec {
    int n_s = 64;
    int n_t = 16;
    int n_axis = 12;  // per-axis count for graph families
};

/**
 * Catalog entry: what the family claims about itself. claimed_alpha is
 * meaningless when alpha_any is set (vector planes).
 */
struct FamilySpec {
    std::string id;
    int n = 2;                   // hypersurface dimension
    bool alpha_any = false;
    double claimed_alpha = 0.0;
    ConeRegion region = ConeRegion::CMinus;
    CausalClass causal = CausalClass::Spacelike;  // causal type of the surface
    GridSpec grid;
    std::string description;
};

/// Graph family x_{n+1} = u(q) over an axis-aligned box in R^n.
struct GraphEval {
    int n = 2;
    GraphKind kind = GraphKind::Spacelike;
    std::function<GraphJet(const std::vector<double>&)> jet;
    std::vector<double> lo, hi;  // box bounds, size n
};

struct Family {
    FamilySpec spec;
    std::optional<SurfaceChart> chart;   // n = 2 families
    std::optional<RuledChart> ruled;     // ruled families (also exposed as chart)
    std::optional<GraphEval> graph;      // graph families, any n
    // Wider domain spanning both cone regions, used by inversion transport
    // for charts whose default scan domain is single-region.
    std::optional<Rect> transport_domain;
};

// --------------------------------------------------------------------------
// Constructors.
// --------------------------------------------------------------------------

/// Chart X(s,t) = s u + t v for a non-degenerate vector plane.
inline Family make_vector_plane(const MVec& u, const MVec& v, Rect domain,
                                const std::string& id = "plane") {
    if (u.dim() != 3 || v.dim() != 3)
        throw DimensionMismatch("make_vector_plane requires dim = 3");
    const double gram = mink_dot(u, u) * mink_dot(v, v) - mink_dot(u, v) * mink_dot(u, v);
    if (std::fabs(gram) <= 1e-12 * (1.0 + u.euclid_norm2() * v.euclid_norm2()))
        throw DegenerateMetric("make_vector_plane: basis spans a degenerate (lightlike) plane");

    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.alpha_any = true;
    fam.spec.causal = gram > 0.0 ? CausalClass::Spacelike : CausalClass::Timelike;
    fam.spec.description = "vector plane, stationary for every alpha";

    auto jets = [u, v](double s, double t) -> ChartJet2 {
        ChartJet2 jet;
        jet.X = u * s + v * t;
        jet.Xs = u;
        jet.Xt = v;
        jet.Xss = MVec::zero(3);
        jet.Xst = MVec::zero(3);
        jet.Xtt = MVec::zero(3);
        return jet;
    };
    fam.chart = SurfaceChart::analytic(jets, domain);
    // Region claim from a sample point.
    fam.spec.region = cone_region(jets(0.5 * (domain.s_lo + domain.s_hi),
                                       0.5 * (domain.t_lo + domain.t_hi)).X);
    fam.ruled = RuledChart::from_curves(
        [u](double s) -> Vec3J {
            return {Jet3{u[0] * s, u[0], 0, 0}, Jet3{u[1] * s, u[1], 0, 0},
                    Jet3{u[2] * s, u[2], 0, 0}};
        },
        constant_curve(v), Interval{domain.s_lo, domain.s_hi},
        Interval{domain.t_lo, domain.t_hi});
    return fam;
}

namespace detail {

/// Hyperbolic-polar chart of p0 + r * (sinh(tau) cos, sinh(tau) sin, sgn cosh(tau)).
inline SurfaceChart hyperboloid_chart(const MVec& p0, double r, int sheet_sign, Rect dom) {
    auto jets = [p0, r, sheet_sign](double tau, double th) -> ChartJet2 {
        const double sh = std::sinh(tau), ch = std::cosh(tau);
        const double c = std::cos(th), sn = std::sin(th);
        const double zs = static_cast<double>(sheet_sign);
        ChartJet2 jet;
        jet.X = p0 + MVec{r * sh * c, r * sh * sn, zs * r * ch};
        jet.Xs = MVec{r * ch * c, r * ch * sn, zs * r * sh};
        jet.Xt = MVec{-r * sh * sn, r * sh * c, 0.0};
        jet.Xss = MVec{r * sh * c, r * sh * sn, zs * r * ch};
        jet.Xst = MVec{-r * ch * sn, r * ch * c, 0.0};
        jet.Xtt = MVec{-r * sh * c, -r * sh * sn, 0.0};
        return jet;
    };
    return SurfaceChart::analytic(jets, dom);
}

/// Pseudosphere chart p0 + r * (cosh(t) cos(s), cosh(t) sin(s), sinh(t)).
inline SurfaceChart pseudosphere_chart(const MVec& p0, double r, Rect dom) {
    auto jets = [p0, r](double s, double t) -> ChartJet2 {
        const double sh = std::sinh(t), ch = std::cosh(t);
        const double c = std::cos(s), sn = std::sin(s);
        ChartJet2 jet;
        jet.X = p0 + MVec{r * ch * c, r * ch * sn, r * sh};
        jet.Xs = MVec{-r * ch * sn, r * ch * c, 0.0};
        jet.Xt = MVec{r * sh * c, r * sh * sn, r * ch};
        jet.Xss = MVec{-r * ch * c, -r * ch * sn, 0.0};
        jet.Xst = MVec{-r * sh * sn, r * sh * c, 0.0};
        jet.Xtt = MVec{r * ch * c, r * ch * sn, r * sh};
        return jet;
    };
    return SurfaceChart::analytic(jets, dom);
}

inline GraphEval hyperbolic_graph(int n, double r) {
    GraphEval g;
    g.n = n;
    g.kind = GraphKind::Spacelike;
    g.jet = [r, n](const std::vector<double>& q) -> GraphJet {
        double q2 = 0.0;
        for (double x : q) q2 += x * x;
        const double u = std::sqrt(q2 + r * r);
        GraphJet jet;
        jet.u = u;
        jet.du.resize(n);
        jet.d2u.assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) jet.du[i] = q[i] / u;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                jet.d2u[i][j] = (i == j ? 1.0 / u : 0.0) - q[i] * q[j] / (u * u * u);
        return jet;
    };
    g.lo.assign(n, -1.2);
    g.hi.assign(n, 1.2);
    return g;
}

inline GraphEval pseudosphere_graph(int n, double r) {
    GraphEval g;
    g.n = n;
    g.kind = GraphKind::Timelike;
    g.jet = [r, n](const std::vector<double>& q) -> GraphJet {
        double q2 = 0.0;
        for (double x : q) q2 += x * x;
        const double u = std::sqrt(q2 - r * r);
        GraphJet jet;
        jet.u = u;
        jet.du.resize(n);
        jet.d2u.assign(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i) jet.du[i] = q[i] / u;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                jet.d2u[i][j] = (i == j ? 1.0 / u : 0.0) - q[i] * q[j] / (u * u * u);
        return jet;
    };
    // Box kept away from |q| = r (cone of the graph is not the issue; the
    // timelike condition |Du| > 1 needs |q| > r).
    g.lo.assign(n, 0.8 * r + 0.4);
    g.hi.assign(n, 0.8 * r + 1.2);
    return g;
}

} // namespace detail

/**
 * Hyperbolic hyperplanes. Centered: H^n(r), alpha = n, inside C^+ (n = 2 chart
 * or graph for n >= 3). Shifted: <p0,p0> = -r^2 with p0 = (0,...,0,r); the
 * component with no cone contact lies in C^+ and fits alpha = +2n, the
 * component through the origin lies in C^- and fits alpha = -2n.
 */
inline Family make_hyperbolic(int n, double r, bool shifted, ConeRegion component,
                              const std::string& id) {
    if (r <= 0.0) throw InvalidArgument("make_hyperbolic: r must be > 0");
    if (n < 2) throw InvalidArgument("make_hyperbolic: n must be >= 2");
    Family fam;
    fam.spec.id = id;
    fam.spec.n = n;
    fam.spec.causal = CausalClass::Spacelike;

    if (!shifted) {
        fam.spec.claimed_alpha = n;
        fam.spec.region = ConeRegion::CPlus;
        fam.spec.description = "centered hyperbolic hyperplane H^n(r)";
        if (n == 2)
            fam.chart = detail::hyperboloid_chart(MVec::zero(3), r, +1,
                                                  Rect{0.15, 1.6, 0.0, 2.8});
        fam.graph = detail::hyperbolic_graph(n, r);
        return fam;
    }

    if (n != 2)
        throw InvalidArgument("make_hyperbolic: shifted families are provided for n = 2 only");
    const MVec p0{0.0, 0.0, r};
    if (component == ConeRegion::CPlus) {
        // Upper component, vertex (0,0,2r); <X,X> = -2 r^2 (1 + cosh tau) < 0.
        fam.spec.claimed_alpha = 2.0 * n;
        fam.spec.region = ConeRegion::CPlus;
        fam.spec.description = "shifted hyperbolic component without cone contact";
        fam.chart = detail::hyperboloid_chart(p0, r, +1, Rect{0.12, 1.6, 0.0, 2.8});
    } else if (component == ConeRegion::CMinus) {
        // Lower component through 0; <X,X> = 2 r^2 (cosh tau - 1) >= 0, so the
        // domain is punctured near the vertex tau = 0.
        fam.spec.claimed_alpha = -2.0 * n;
        fam.spec.region = ConeRegion::CMinus;
        fam.spec.description = "shifted hyperbolic component through the origin (punctured)";
        fam.chart = detail::hyperboloid_chart(p0, r, -1, Rect{0.35, 1.8, 0.0, 2.8});
    } else {
        throw InvalidArgument("make_hyperbolic: component must be C+ or C-");
    }
    return fam;
}

/**
 * Pseudospheres. Centered: S_1^n(r), alpha = n, inside C^-. Shifted:
 * <p0,p0> = r^2 with p0 = (r,0,...,0); the C^- part fits alpha = +2n and the
 * C^+ part alpha = -2n.
 */
inline Family make_pseudosphere(int n, double r, bool shifted, ConeRegion component,
                                const std::string& id) {
    if (r <= 0.0) throw InvalidArgument("make_pseudosphere: r must be > 0");
    if (n < 2) throw InvalidArgument("make_pseudosphere: n must be >= 2");
    Family fam;
    fam.spec.id = id;
    fam.spec.n = n;
    fam.spec.causal = CausalClass::Timelike;

    if (!shifted) {
        fam.spec.claimed_alpha = n;
        fam.spec.region = ConeRegion::CMinus;
        fam.spec.description = "centered pseudosphere S_1^n(r)";
        if (n == 2)
            fam.chart = detail::pseudosphere_chart(MVec::zero(3), r, Rect{0.0, 6.28, -1.2, 1.2});
        fam.graph = detail::pseudosphere_graph(n, r);
        return fam;
    }

    if (n != 2)
        throw InvalidArgument("make_pseudosphere: shifted families are provided for n = 2 only");
    const MVec p0{r, 0.0, 0.0};
    if (component == ConeRegion::CMinus) {
        // <X,X> = 2 r^2 (1 + cosh t cos s) > 0 for |s| < pi/2.
        fam.spec.claimed_alpha = 2.0 * n;
        fam.spec.region = ConeRegion::CMinus;
        fam.spec.description = "shifted pseudosphere, C^- part";
        fam.chart = detail::pseudosphere_chart(p0, r, Rect{-1.2, 1.2, -1.2, 1.2});
    } else if (component == ConeRegion::CPlus) {
        // cosh t cos s < -1: s near pi, |t| above arcosh(1/|cos s|).
        fam.spec.claimed_alpha = -2.0 * n;
        fam.spec.region = ConeRegion::CPlus;
        fam.spec.description = "shifted pseudosphere, C^+ part";
        fam.chart = detail::pseudosphere_chart(p0, r, Rect{2.7, 3.58, 1.2, 2.0});
    } else {
        throw InvalidArgument("make_pseudosphere: component must be C+ or C-");
    }
    return fam;
}

/// Ruled families of the (w, w' non-lightlike) classification.
inline Family make_thnli(const std::string& branch, double c1, double c2, int exp_sign,
                         const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.causal = CausalClass::Timelike;
    Curve gamma, w;
    Interval s_range, t_range;

    if (branch == "1a") {
        const double sgn = exp_sign >= 0 ? 1.0 : -1.0;
        gamma = [sgn](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {Jet3::constant(0), Jet3::constant(0), exp(js * sgn)};
        };
        w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {cos(js), sin(js), Jet3::constant(0)};
        };
        s_range = {-0.5, 0.5};
        t_range = {-0.5, 0.5};  // |t| < e^{+-s} keeps the patch in C^+
    } else if (branch == "1b") {
        if (std::fabs(c1 * c1 + c2 * c2 - 1.0) > 1e-12)
            throw InvalidArgument("make_thnli(1b): requires c1^2 + c2^2 = 1");
        gamma = [c1, c2](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {-sin(js), cos(js), cosh(js) * c1 + sinh(js) * c2};
        };
        w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {cos(js), sin(js), Jet3::constant(0)};
        };
        s_range = {0.75, 1.35};
        t_range = {-0.55, 0.55};  // <X,X> = t^2 + 1 - (c1 cosh + c2 sinh)^2 < 0 here
    } else if (branch == "2") {
        if (std::fabs(c1 * c1 + c2 * c2 - 1.0) > 1e-12)
            throw InvalidArgument("make_thnli(2): requires c1^2 + c2^2 = 1");
        gamma = [c1, c2](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {sinh(js), cos(js) * c1 + sin(js) * c2, cosh(js)};
        };
        w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {cosh(js), Jet3::constant(0), sinh(js)};
        };
        s_range = {-0.45, 0.45};
        t_range = {-0.35, 0.35};
    } else {
        throw InvalidArgument("make_thnli: branch must be 1a, 1b or 2");
    }

    fam.ruled = RuledChart::from_curves(gamma, w, s_range, t_range);
    fam.chart = as_surface_chart(*fam.ruled);
    // Claimed |alpha| = 1, sign fixed by the measured sign pair at a sample.
    const ChartJet2 mid = ruled_jet(*fam.ruled, s_range.mid(), t_range.mid());
    const int er = region_sign(cone_region(mid.X));
    const int en = fundamental_forms(mid).eps_normal;
    fam.spec.claimed_alpha = static_cast<double>(er * en);
    fam.spec.region = er > 0 ? ConeRegion::CPlus : ConeRegion::CMinus;
    fam.spec.description = "ruled family, w and w' non-lightlike, branch " + branch;
    return fam;
}

/// Ruled families with lightlike rulings (gamma = w' sphere family and the
/// explicit identity-branch example).
inline Family make_thli(const std::string& branch, double s0, ConeRegion component,
                        const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.causal = CausalClass::Timelike;
    Curve gamma, w;
    Interval s_range, t_range;

    if (branch == "1") {
        w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {sinh(js), Jet3::constant(1), cosh(js)};
        };
        gamma = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {cosh(js), Jet3::constant(0), sinh(js)};
        };
        s_range = {-1.0, 1.0};
        t_range = {-2.0, 2.0};
        fam.spec.claimed_alpha = 2.0;
        fam.spec.region = ConeRegion::CMinus;  // <X,X> = 1
        fam.spec.description = "lightlike-ruling family gamma = w' inside S_1^2(1)";
    } else if (branch == "2b") {
        if (!(s0 > 0.0 && s0 < 1.5707))
            throw InvalidArgument("make_thli(2b): requires 0 < s0 < pi/2");
        gamma = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {sin(js), -cos(js), tan(js * 0.5)};
        };
        w = [](double s) -> Vec3J {
            const Jet3 js = Jet3::variable(s);
            return {cos(js), sin(js), Jet3::constant(1)};
        };
        s_range = {s0, 1.47};
        const double u0 = std::tan(0.5 * s0);
        const double bound = (1.0 - u0 * u0) / (2.0 * u0);
        if (component == ConeRegion::CMinus) {
            t_range = {-2.0, 0.0};
            fam.spec.claimed_alpha = 4.0;
            fam.spec.region = ConeRegion::CMinus;
        } else if (component == ConeRegion::CPlus) {
            t_range = {bound + 0.5, bound + 2.5};
            fam.spec.claimed_alpha = -4.0;
            fam.spec.region = ConeRegion::CPlus;
        } else {
            throw InvalidArgument("make_thli(2b): component must be C+ or C-");
        }
        fam.spec.description = "lightlike-ruling identity-branch example";
    } else {
        throw InvalidArgument("make_thli: branch must be 1 or 2b");
    }

    fam.ruled = RuledChart::from_curves(gamma, w, s_range, t_range);
    fam.chart = as_surface_chart(*fam.ruled);
    return fam;
}

enum class GraphFamilyKind { HyperbolicUpper, MaximalHorizontalPlane, TimelikeVerticalPlane };

/**
 * Graph-flavoured catalog families. The horizontal plane x_{n+1} = c and the
 * vertical plane x_1 = c are the two inversion worked examples; the vertical
 * plane is not a graph over x_{n+1} = 0 and is exposed as a chart only.
 */
inline Family make_graph_family(GraphFamilyKind kind, double param, const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;

    if (kind == GraphFamilyKind::HyperbolicUpper) {
        fam = make_hyperbolic(2, param, false, ConeRegion::CPlus, id);
        return fam;
    }

    if (kind == GraphFamilyKind::MaximalHorizontalPlane) {
        const double c = param;
        if (c == 0.0) throw InvalidArgument("maximal plane: c = 0 is the vector plane");
        fam.spec.claimed_alpha = 0.0;
        fam.spec.causal = CausalClass::Spacelike;
        fam.spec.description = "maximal plane x_3 = c";
        GraphEval g;
        g.n = 2;
        g.kind = GraphKind::Spacelike;
        g.jet = [c](const std::vector<double>& q) -> GraphJet {
            GraphJet jet;
            jet.u = c;
            jet.du.assign(q.size(), 0.0);
            jet.d2u.assign(q.size(), std::vector<double>(q.size(), 0.0));
            return jet;
        };
        const double a = std::fabs(c);
        g.lo = {1.2 * a, 1.2 * a};
        g.hi = {3.0 * a, 3.0 * a};
        fam.graph = g;
        auto jets = [c](double s, double t) -> ChartJet2 {
            ChartJet2 jet;
            jet.X = MVec{s, t, c};
            jet.Xs = MVec{1, 0, 0};
            jet.Xt = MVec{0, 1, 0};
            jet.Xss = MVec::zero(3);
            jet.Xst = MVec::zero(3);
            jet.Xtt = MVec::zero(3);
            return jet;
        };
        fam.chart = SurfaceChart::analytic(jets, Rect{1.2 * a, 3.0 * a, 1.2 * a, 3.0 * a});
        fam.spec.region = ConeRegion::CMinus;  // default grid sits on the C^- part
        fam.transport_domain = Rect{-3.0 * a, 3.0 * a, -3.0 * a, 3.0 * a};
        return fam;
    }

    // Vertical plane x_1 = c, timelike, H = 0.
    const double c = param;
    if (c == 0.0) throw InvalidArgument("vertical plane: c = 0 is the vector plane");
    fam.spec.claimed_alpha = 0.0;
    fam.spec.causal = CausalClass::Timelike;
    fam.spec.description = "timelike plane x_1 = c";
    auto jets = [c](double s, double t) -> ChartJet2 {
        ChartJet2 jet;
        jet.X = MVec{c, s, t};
        jet.Xs = MVec{0, 1, 0};
        jet.Xt = MVec{0, 0, 1};
        jet.Xss = MVec::zero(3);
        jet.Xst = MVec::zero(3);
        jet.Xtt = MVec::zero(3);
        return jet;
    };
    const double a = std::fabs(c);
    fam.chart = SurfaceChart::analytic(jets, Rect{1.2 * a, 3.0 * a, -0.4 * a, 0.4 * a});
    fam.spec.region = ConeRegion::CMinus;
    fam.transport_domain = Rect{-1.2 * a, 1.2 * a, -2.4 * a, 2.4 * a};
    return fam;
}

// --------------------------------------------------------------------------
// Negative controls used by the verifier and CLI demos.
// --------------------------------------------------------------------------

inline Family make_circular_cylinder(double R, const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.alpha_any = false;
    fam.spec.description = "circular cylinder (negative control)";
    Curve gamma = [R](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {cos(js) * R, sin(js) * R, Jet3::constant(0)};
    };
    fam.ruled = RuledChart::from_curves(gamma, constant_curve(MVec{0, 0, 1}),
                                        Interval{0.0, 6.0}, Interval{-0.4, 0.4});
    fam.chart = as_surface_chart(*fam.ruled);
    fam.spec.region = ConeRegion::CMinus;
    fam.spec.causal = CausalClass::Timelike;
    return fam;
}

/// Helicoid-like chart with varying pitch; not stationary for any alpha.
inline Family make_helicoid_like(const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.description = "helicoid-like chart with varying pitch (negative control)";
    Curve gamma = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {Jet3::constant(0), Jet3::constant(0),
                Jet3::constant(1) + js + js * js * 0.5};
    };
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {cos(js), sin(js), Jet3::constant(0)};
    };
    fam.ruled = RuledChart::from_curves(gamma, w, Interval{-0.4, 0.4}, Interval{-0.4, 0.4});
    fam.chart = as_surface_chart(*fam.ruled);
    fam.spec.region = ConeRegion::CPlus;
    fam.spec.causal = CausalClass::Timelike;
    return fam;
}

/// Witness chart of the (w non-lightlike, w' lightlike) rejection theorem.
inline Family make_thnli2_witness(const std::string& id) {
    Family fam;
    fam.spec.id = id;
    fam.spec.n = 2;
    fam.spec.description = "w = (1,-s,-s) with non-planar parabola base (negative control)";
    Curve gamma = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {js * js * 0.5, js, Jet3::constant(0)};
    };
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {Jet3::constant(1), -js, -js};
    };
    fam.ruled = RuledChart::from_curves(gamma, w, Interval{0.3, 1.3}, Interval{0.2, 1.0});
    fam.chart = as_surface_chart(*fam.ruled);
    fam.spec.region = ConeRegion::CMinus;
    fam.spec.causal = CausalClass::Timelike;
    return fam;
}

// --------------------------------------------------------------------------
// Registry: families addressable by string id, "name?key=value&key=value".
// --------------------------------------------------------------------------

namespace detail {

struct ParsedId {
    std::string name;
    std::map<std::string, double> params;
};

inline ParsedId parse_family_id(const std::string& id) {
    ParsedId out;
    const auto qpos = id.find('?');
    out.name = id.substr(0, qpos);
    if (qpos == std::string::npos) return out;
    std::stringstream ss(id.substr(qpos + 1));
    std::string item;
    while (std::getline(ss, item, '&')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InvalidArgument("bad family parameter: '" + item + "'");
        try {
            out.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw InvalidArgument("bad family parameter value: '" + item + "'");
        }
    }
    return out;
}

inline double get_param(const ParsedId& p, const std::string& key, double dflt) {
    auto it = p.params.find(key);
    return it == p.params.end() ? dflt : it->second;
}

} // namespace detail

inline std::vector<std::string> list_families() {
    return {"pr1-2a", "pr1-2b", "pr1-3a", "pr1-3b",
            "thnli-1a", "thnli-1b", "thnli-2",
            "thli-1", "thli-2b",
            "plane-e1e2", "plane-e1e3", "plane-x3", "plane-x1",
            "cyl-circle", "helicoid-like", "thnli2-witness"};
}

/// Families the catalog claims stationary, instantiated with default
/// parameters; the sweep `scan-catalog` runs each at its claimed alpha.
inline std::vector<std::string> stationary_family_ids() {
    return {"pr1-2a?n=2&r=1",          "pr1-2a?n=3&r=1",
            "pr1-3a?n=2&r=1",          "pr1-3a?n=3&r=1",
            "pr1-2a?n=2&r=1&shifted=1", "pr1-2b?n=2&r=1",
            "pr1-3a?n=2&r=1&shifted=1", "pr1-3b?n=2&r=1",
            "thnli-1a",                "thnli-1b?c1=1&c2=0",
            "thnli-2?c1=0&c2=1",       "thli-1",
            "thli-2b?region=-1",       "thli-2b?region=1",
            "plane-e1e2",              "plane-e1e3",
            "plane-x3?c=0.5",          "plane-x1?c=1"};
}

/**
 * Resolve a family id. Examples: "pr1-2a?n=2&r=1", "pr1-2a?n=2&r=1&shifted=1",
 * "thnli-1b?c1=1&c2=0", "thli-2b?s0=0.7854&region=-1", "plane-x3?c=0.5".
 */
inline Family make_family(const std::string& id) {
    const detail::ParsedId p = detail::parse_family_id(id);
    const int n = static_cast<int>(detail::get_param(p, "n", 2));
    const double r = detail::get_param(p, "r", 1.0);

    if (p.name == "pr1-2a") {
        const bool shifted = detail::get_param(p, "shifted", 0) != 0;
        return make_hyperbolic(n, r, shifted, ConeRegion::CPlus, id);
    }
    if (p.name == "pr1-2b") return make_hyperbolic(2, r, true, ConeRegion::CMinus, id);
    if (p.name == "pr1-3a") {
        const bool shifted = detail::get_param(p, "shifted", 0) != 0;
        return make_pseudosphere(n, r, shifted, ConeRegion::CMinus, id);
    }
    if (p.name == "pr1-3b") return make_pseudosphere(2, r, true, ConeRegion::CPlus, id);
    if (p.name == "thnli-1a")
        return make_thnli("1a", 0, 0, static_cast<int>(detail::get_param(p, "sign", 1)), id);
    if (p.name == "thnli-1b")
        return make_thnli("1b", detail::get_param(p, "c1", 1), detail::get_param(p, "c2", 0), 1, id);
    if (p.name == "thnli-2")
        return make_thnli("2", detail::get_param(p, "c1", 0), detail::get_param(p, "c2", 1), 1, id);
    if (p.name == "thli-1") return make_thli("1", 0, ConeRegion::CMinus, id);
    if (p.name == "thli-2b") {
        const double s0 = detail::get_param(p, "s0", 0.7853981633974483);
        const ConeRegion comp =
            detail::get_param(p, "region", -1) < 0 ? ConeRegion::CMinus : ConeRegion::CPlus;
        return make_thli("2b", s0, comp, id);
    }
    if (p.name == "plane-e1e2")
        return make_vector_plane(MVec{1, 0, 0}, MVec{0, 1, 0}, Rect{0.3, 1.3, 0.3, 1.3}, id);
    if (p.name == "plane-e1e3")
        return make_vector_plane(MVec{1, 0, 0}, MVec{0, 0, 1}, Rect{1.0, 2.0, -0.45, 0.45}, id);
    if (p.name == "plane-x3")
        return make_graph_family(GraphFamilyKind::MaximalHorizontalPlane,
                                 detail::get_param(p, "c", 0.5), id);
    if (p.name == "plane-x1")
        return make_graph_family(GraphFamilyKind::TimelikeVerticalPlane,
                                 detail::get_param(p, "c", 1.0), id);
    if (p.name == "cyl-circle") return make_circular_cylinder(detail::get_param(p, "R", 1.0), id);
    if (p.name == "helicoid-like") return make_helicoid_like(id);
    if (p.name == "thnli2-witness") return make_thnli2_witness(id);
    throw InvalidArgument("unknown family id: '" + id + "'");
}

} // namespace minkstat
