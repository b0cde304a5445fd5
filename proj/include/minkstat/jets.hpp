#pragma once
#include <array>
#include <cmath>
#include <functional>

#include "minkstat/minkowski.hpp"

namespace minkstat {

/**
 * Scalar 3-jet: value and first three derivatives with respect to one
 * parameter, propagated by truncated Taylor arithmetic. Declaring curves
 * through Jet3 expressions gives exact analytic derivatives for all the
 * closed-form families without any symbolic engine.
 */
struct Jet3 {
    double f = 0.0;   // value
    double f1 = 0.0;  // d/ds
    double f2 = 0.0;  // d^2/ds^2
    double f3 = 0.0;  // d^3/ds^3

    static Jet3 variable(double s) { return {s, 1.0, 0.0, 0.0}; }
    static Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }

    Jet3 operator+(const Jet3& o) const { return {f + o.f, f1 + o.f1, f2 + o.f2, f3 + o.f3}; }
    Jet3 operator-(const Jet3& o) const { return {f - o.f, f1 - o.f1, f2 - o.f2, f3 - o.f3}; }
    Jet3 operator-() const { return {-f, -f1, -f2, -f3}; }

    Jet3 operator*(const Jet3& o) const {
        return {f * o.f,
                f1 * o.f + f * o.f1,
                f2 * o.f + 2.0 * f1 * o.f1 + f * o.f2,
                f3 * o.f + 3.0 * f2 * o.f1 + 3.0 * f1 * o.f2 + f * o.f3};
    }

    Jet3 operator/(const Jet3& g) const {
        // Solve f = h*g order by order.
        Jet3 h;
        h.f = f / g.f;
        h.f1 = (f1 - h.f * g.f1) / g.f;
        h.f2 = (f2 - 2.0 * h.f1 * g.f1 - h.f * g.f2) / g.f;
        h.f3 = (f3 - 3.0 * h.f2 * g.f1 - 3.0 * h.f1 * g.f2 - h.f * g.f3) / g.f;
        return h;
    }

    Jet3 operator+(double c) const { return {f + c, f1, f2, f3}; }
    Jet3 operator-(double c) const { return {f - c, f1, f2, f3}; }
    Jet3 operator*(double c) const { return {f * c, f1 * c, f2 * c, f3 * c}; }
    Jet3 operator/(double c) const { return {f / c, f1 / c, f2 / c, f3 / c}; }
};

inline Jet3 operator+(double c, const Jet3& j) { return j + c; }
inline Jet3 operator-(double c, const Jet3& j) { return (-j) + c; }
inline Jet3 operator*(double c, const Jet3& j) { return j * c; }
inline Jet3 operator/(double c, const Jet3& j) { return Jet3::constant(c) / j; }

/// Chain rule for u = phi(g) with outer derivatives u0..u3 evaluated at g.f.
inline Jet3 jet_compose(const Jet3& g, double u0, double u1, double u2, double u3) {
    return {u0,
            u1 * g.f1,
            u2 * g.f1 * g.f1 + u1 * g.f2,
            u3 * g.f1 * g.f1 * g.f1 + 3.0 * u2 * g.f1 * g.f2 + u1 * g.f3};
}

inline Jet3 sin(const Jet3& g) {
    const double s = std::sin(g.f), c = std::cos(g.f);
    return jet_compose(g, s, c, -s, -c);
}
inline Jet3 cos(const Jet3& g) {
    const double s = std::sin(g.f), c = std::cos(g.f);
    return jet_compose(g, c, -s, -c, s);
}
inline Jet3 sinh(const Jet3& g) {
    const double s = std::sinh(g.f), c = std::cosh(g.f);
    return jet_compose(g, s, c, s, c);
}
inline Jet3 cosh(const Jet3& g) {
    const double s = std::sinh(g.f), c = std::cosh(g.f);
    return jet_compose(g, c, s, c, s);
}
inline Jet3 exp(const Jet3& g) {
    const double e = std::exp(g.f);
    return jet_compose(g, e, e, e, e);
}
inline Jet3 tan(const Jet3& g) {
    const double t = std::tan(g.f);
    const double s2 = 1.0 + t * t;  // sec^2
    return jet_compose(g, t, s2, 2.0 * t * s2, s2 * (2.0 * s2 + 4.0 * t * t));
}
inline Jet3 sqrt(const Jet3& g) {
    // Solve r^2 = g order by order.
    Jet3 r;
    r.f = std::sqrt(g.f);
    r.f1 = g.f1 / (2.0 * r.f);
    r.f2 = (g.f2 - 2.0 * r.f1 * r.f1) / (2.0 * r.f);
    r.f3 = (g.f3 - 6.0 * r.f1 * r.f2) / (2.0 * r.f);
    return r;
}

/// Jet of the derivative function: loses the top order (d3 set to zero).
inline Jet3 jet_derivative(const Jet3& g) { return {g.f1, g.f2, g.f3, 0.0}; }

// --------------------------------------------------------------------------
// Curves in L^3 as Jet3-valued component triples.
// --------------------------------------------------------------------------

using Vec3J = std::array<Jet3, 3>;

inline Vec3J operator+(const Vec3J& a, const Vec3J& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3J operator-(const Vec3J& a, const Vec3J& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3J operator*(const Vec3J& a, const Jet3& c) {
    return {a[0] * c, a[1] * c, a[2] * c};
}

inline Jet3 mink_dot(const Vec3J& a, const Vec3J& b) {
    return a[0] * b[0] + a[1] * b[1] - a[2] * b[2];
}

/// Curve s -> (x(s), y(s), z(s)) evaluated as component 3-jets.
using Curve = std::function<Vec3J(double)>;

/// Position and first three derivatives of a curve at one parameter value.
struct CurveJet {
    MVec p, d1, d2, d3;
};

inline CurveJet eval_curve(const Curve& c, double s) {
    const Vec3J v = c(s);
    return {MVec{v[0].f, v[1].f, v[2].f},
            MVec{v[0].f1, v[1].f1, v[2].f1},
            MVec{v[0].f2, v[1].f2, v[2].f2},
            MVec{v[0].f3, v[1].f3, v[2].f3}};
}

/// Constant curve.
inline Curve constant_curve(const MVec& v) {
    if (v.dim() != 3) throw DimensionMismatch("constant_curve requires dim = 3");
    const double x = v[0], y = v[1], z = v[2];
    return [x, y, z](double) -> Vec3J {
        return {Jet3::constant(x), Jet3::constant(y), Jet3::constant(z)};
    };
}

/**
 * Wrap a position-only function with central finite differences. Third
 * derivatives use the 2h-spaced 5-point stencil; accuracy O(h^2) on C^4
 * curves. Prefer Jet3-defined curves when closed forms are available.
 */
inline Curve curve_from_positions(std::function<MVec(double)> pos, double h = 1e-4) {
    if (h <= 0.0) throw InvalidArgument("curve_from_positions: h must be > 0");
    return [pos = std::move(pos), h](double s) -> Vec3J {
        const MVec pm2 = pos(s - 2.0 * h), pm1 = pos(s - h), p0 = pos(s),
                   pp1 = pos(s + h), pp2 = pos(s + 2.0 * h);
        Vec3J out;
        for (int i = 0; i < 3; ++i) {
            const double d1 = (pp1[i] - pm1[i]) / (2.0 * h);
            const double d2 = (pp1[i] - 2.0 * p0[i] + pm1[i]) / (h * h);
            const double d3 = (pp2[i] - 2.0 * pp1[i] + 2.0 * pm1[i] - pm2[i]) / (2.0 * h * h * h);
            out[i] = Jet3{p0[i], d1, d2, d3};
        }
        return out;
    };
}

} // namespace minkstat
