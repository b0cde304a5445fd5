#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "minkstat/jets.hpp"
#include "minkstat/spline.hpp"

using namespace minkstat;
using Catch::Approx;

namespace {

/// Finite-difference derivatives of a scalar function, the oracle for Jet3.
struct FdDerivs {
    double d1, d2, d3;
};

FdDerivs fd(const std::function<double(double)>& f, double s, double h = 1e-3) {
    return {(f(s + h) - f(s - h)) / (2 * h),
            (f(s + h) - 2 * f(s) + f(s - h)) / (h * h),
            (f(s + 2 * h) - 2 * f(s + h) + 2 * f(s - h) - f(s - 2 * h)) / (2 * h * h * h)};
}

} // namespace

TEST_CASE("Jet3 arithmetic against finite differences") {
    auto expr = [](double s) {
        return std::sin(s) * std::exp(0.3 * s) / (2.0 + std::cos(s)) +
               std::sqrt(1.0 + s * s) * std::tanh(1.0) + std::tan(0.2 * s);
    };
    auto jexpr = [](Jet3 s) {
        return sin(s) * exp(s * 0.3) / (cos(s) + 2.0) +
               sqrt(s * s + 1.0) * std::tanh(1.0) + tan(s * 0.2);
    };
    for (double s : {-1.3, -0.4, 0.0, 0.7, 1.9}) {
        const Jet3 j = jexpr(Jet3::variable(s));
        const FdDerivs o = fd(expr, s);
        CHECK(j.f == Approx(expr(s)).margin(1e-14));
        CHECK(j.f1 == Approx(o.d1).margin(1e-7));
        CHECK(j.f2 == Approx(o.d2).margin(1e-6));
        CHECK(j.f3 == Approx(o.d3).margin(1e-4));
    }
}

TEST_CASE("Jet3 hyperbolic and derivative-shift rules") {
    const Jet3 s = Jet3::variable(0.8);
    const Jet3 c = cosh(s), sh = sinh(s);
    CHECK(c.f1 == Approx(sh.f));
    CHECK(sh.f2 == Approx(sh.f));
    const Jet3 d = jet_derivative(sh);
    CHECK(d.f == Approx(sh.f1));
    CHECK(d.f1 == Approx(sh.f2));
    CHECK(d.f2 == Approx(sh.f3));
}

TEST_CASE("curve evaluation and the FD fallback") {
    Curve helix = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {cos(js), sin(js), js * 0.5};
    };
    const CurveJet j = eval_curve(helix, 0.6);
    CHECK(j.p[0] == Approx(std::cos(0.6)));
    CHECK(j.d1[0] == Approx(-std::sin(0.6)));
    CHECK(j.d2[1] == Approx(-std::sin(0.6)));
    CHECK(j.d3[0] == Approx(std::sin(0.6)));

    Curve fdc = curve_from_positions(
        [](double s) { return MVec{std::cos(s), std::sin(s), 0.5 * s}; });
    const CurveJet k = eval_curve(fdc, 0.6);
    CHECK(k.d1[0] == Approx(j.d1[0]).margin(1e-8));
    CHECK(k.d2[1] == Approx(j.d2[1]).margin(1e-6));
    CHECK(k.d3[0] == Approx(j.d3[0]).margin(1e-4));
}

TEST_CASE("not-a-knot spline reproduces cubics exactly") {
    auto poly = [](double x) { return ((0.5 * x - 1.0) * x + 2.0) * x - 3.0; };
    std::vector<double> xs, ys;
    for (int i = 0; i <= 12; ++i) {
        const double x = -1.0 + 2.0 * i / 12.0;
        xs.push_back(x);
        ys.push_back(poly(x));
    }
    const CubicSpline sp(xs, ys);
    for (double x : {-0.95, -0.31, 0.0, 0.4, 0.77}) {
        const Jet3 j = sp.eval(x);
        CHECK(j.f == Approx(poly(x)).margin(1e-12));
        CHECK(j.f1 == Approx(1.5 * x * x - 2.0 * x + 2.0).margin(1e-11));
        CHECK(j.f2 == Approx(3.0 * x - 2.0).margin(1e-10));
        CHECK(j.f3 == Approx(3.0).margin(1e-9));
    }
}

TEST_CASE("spline derivative accuracy on a smooth curve") {
    std::vector<double> xs, ys;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double x = 2.0 * i / n;
        xs.push_back(x);
        ys.push_back(std::sin(1.7 * x));
    }
    const CubicSpline sp(xs, ys);
    for (double x : {0.21, 0.63, 1.11, 1.73}) {
        const Jet3 j = sp.eval(x);
        CHECK(j.f == Approx(std::sin(1.7 * x)).margin(1e-9));
        CHECK(j.f1 == Approx(1.7 * std::cos(1.7 * x)).margin(1e-6));
        CHECK(j.f2 == Approx(-1.7 * 1.7 * std::sin(1.7 * x)).margin(1e-3));
    }
}

TEST_CASE("spline input validation") {
    CHECK_THROWS_AS(CubicSpline({0, 1, 2}, {0, 1, 2}), InvalidArgument);
    CHECK_THROWS_AS(CubicSpline({0, 1, 1, 2}, {0, 1, 2, 3}), InvalidArgument);
    CHECK_THROWS_AS(CubicSpline({0, 1, 2, 3}, {0, 1, 2}), InvalidArgument);
}

TEST_CASE("spline curve carries jets for all three components") {
    std::vector<double> ss;
    std::vector<MVec> pts;
    const int n = 200;
    for (int i = 0; i <= n; ++i) {
        const double s = 3.0 * i / n;
        ss.push_back(s);
        pts.push_back(MVec{std::cos(s), std::sin(s), 0.25 * s * s});
    }
    const Curve c = spline_curve(ss, pts);
    const CurveJet j = eval_curve(c, 1.4);
    CHECK(j.p[2] == Approx(0.25 * 1.4 * 1.4).margin(1e-9));
    CHECK(j.d1[0] == Approx(-std::sin(1.4)).margin(1e-5));
    CHECK(j.d2[2] == Approx(0.5).margin(1e-4));
}
