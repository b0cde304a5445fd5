#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "minkstat/catalog.hpp"
#include "minkstat/ruled.hpp"

using namespace minkstat;
using Catch::Approx;

namespace {

RuledChart thnli_1a() { return *make_family("thnli-1a").ruled; }
RuledChart thnli_1b() { return *make_family("thnli-1b?c1=1&c2=0").ruled; }
RuledChart thnli_2() { return *make_family("thnli-2?c1=0&c2=1").ruled; }
RuledChart thli_1() { return *make_family("thli-1").ruled; }
RuledChart thli_2b() { return *make_family("thli-2b?region=-1").ruled; }

int eps_region_of(const RuledChart& c) {
    return region_sign(cone_region(ruled_jet(c, c.s_range.mid(), c.t_range.mid()).X));
}

/// Minkowski isometry: rotation in (x1,x2) composed with a boost in (x1,x3).
MVec isometry(const MVec& v, double theta, double phi) {
    const double c = std::cos(theta), s = std::sin(theta);
    const MVec r{c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]};
    const double ch = std::cosh(phi), sh = std::sinh(phi);
    return MVec{ch * r[0] + sh * r[2], r[1], sh * r[0] + ch * r[2]};
}

RuledChart transformed(const RuledChart& chart, double theta, double phi, double lam) {
    auto jf = chart.jets_fn;
    return RuledChart::from_jets(
        [jf, theta, phi, lam](double s) -> RuledJets {
            const RuledJets j = jf(s);
            auto T = [&](const MVec& v) { return isometry(v, theta, phi) * lam; };
            return {T(j.g), T(j.g1), T(j.g2), T(j.w), T(j.w1), T(j.w2)};
        },
        chart.s_range, chart.t_range);
}

} // namespace

TEST_CASE("ruled jets") {
    const RuledChart trivial = RuledChart::from_curves(
        constant_curve(MVec{0, 0, 0})
        , constant_curve(MVec{1, 0, 0}), Interval{-1, 1}, Interval{-3, 3});
    const ChartJet2 j = ruled_jet(trivial, 0.0, 2.0);
    CHECK(j.X[0] == 2.0);
    CHECK(j.Xtt.is_zero());
    CHECK(j.Xst.is_zero());  // cylinder: w constant

    const ChartJet2 k = ruled_jet(thnli_1a(), 0.0, 1.0);
    CHECK(k.X[0] == Approx(1.0));
    CHECK(k.X[1] == Approx(0.0));
    CHECK(k.X[2] == Approx(1.0));
    CHECK(k.Xtt.is_zero());

    CHECK_THROWS_AS(ruled_jet(thnli_1a(), 7.0, 0.0), DomainError);
}

TEST_CASE("h1 ties back to the mean curvature") {
    // H1 = eps * H * W * sqrt|W| on any chart.
    for (const ChartJet2& jet : {ruled_jet(thli_1(), 0.4, 1.2),
                                 make_family("pr1-2a?n=2&r=1").chart->jets(0.8, 0.5)}) {
        const FundamentalForms ff = fundamental_forms(jet);
        const double H = mean_curvature(ff);
        const double want = ff.eps_normal * H * ff.W * std::sqrt(std::fabs(ff.W));
        CHECK(h1(jet) == Approx(want).margin(1e-10 * (1.0 + std::fabs(want))));
    }
    // Planes have H1 = 0.
    CHECK(h1(make_family("plane-e1e2").chart->jets(0.5, 0.5)) == 0.0);
}

TEST_CASE("stationarity polynomial: catalog families annihilate it") {
    {
        const RuledChart c = thnli_1a();
        const int er = eps_region_of(c);
        for (double s : c.s_range.grid(7)) {
            const TPolynomial P = ruled_stationarity_poly(c, s, 1.0, er);
            CHECK(P.max_abs() <= 1e-8);
            // Shifted alpha must break stationarity.
            const TPolynomial Q = ruled_stationarity_poly(c, s, 1.5, er);
            CHECK(Q.max_abs() >= 1e-2);
        }
    }
    // Vector planes annihilate it for every alpha.
    const RuledChart plane = *make_family("plane-e1e3").ruled;
    for (double a : {-3.0, 0.0, 7.0})
        CHECK(ruled_stationarity_poly(plane, 1.5, a, -1).max_abs() <= 1e-12);
}

TEST_CASE("stationarity polynomial reconstructs pointwise values") {
    const RuledChart c = thli_2b();
    const int er = eps_region_of(c);
    std::mt19937_64 rng(20250810ULL + 10);
    std::uniform_real_distribution<double> ts(c.t_range.lo, c.t_range.hi);
    for (double s : {0.85, 1.1, 1.3}) {
        const double alpha = 2.7;  // arbitrary off-family alpha
        const TPolynomial P = ruled_stationarity_poly(c, s, alpha, er);
        const RuledJets rj = c.jets(s);
        const int en = ruled_eps_normal(rj, c.t_range);
        for (int i = 0; i < 8; ++i) {
            const double t = ts(rng);
            const double direct = cleared_value(ruled_jet(rj, t), alpha * er * en);
            CHECK(P.eval(t) == Approx(direct).margin(1e-8 * (1.0 + std::fabs(direct))));
        }
        // Degree bound: nothing above t^4 for ruled charts.
        CHECK(std::fabs(P.coeff[5]) <= 1e-9);
    }
}

TEST_CASE("ruling classification") {
    CHECK(ruling_class(thnli_1a()) == RulingClass::NonLightlikeW_NonLightlikeWp);
    CHECK(ruling_class(*make_family("thnli2-witness").ruled) ==
          RulingClass::NonLightlikeW_LightlikeWp);
    CHECK(ruling_class(thli_2b()) == RulingClass::LightlikeW);
    CHECK(ruling_class(*make_family("cyl-circle").ruled) == RulingClass::Cylindrical);

    // Mixed causal class along I fails hard: w = (s, 0, 1) crosses the cone.
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {js, Jet3::constant(0), Jet3::constant(1)};
    };
    const RuledChart mixed = RuledChart::from_curves(constant_curve(MVec{0, 1, 0}), w,
                                                     Interval{0.5, 1.5}, Interval{0, 1});
    CHECK_THROWS_AS(ruling_class(mixed), MixedClass);
}

TEST_CASE("non-lightlike normalization invariants") {
    // (1b): already in normal form; a = 1, c = -a' = 0, kappa_g = 0, Q != 0.
    const RuledNormalization nb = normalize_nonlightlike(thnli_1b());
    CHECK(nb.delta == 1);
    CHECK(nb.mu == 1);
    for (double s : nb.chart.s_range.grid(9)) {
        const NormalizedScalars sc = nb.scalars(s);
        const RuledJets j = nb.chart.jets_fn(s);
        CHECK(std::fabs(mink_dot(j.g1, j.w1)) <= 1e-9);           // striction
        CHECK(std::fabs(mink_dot(j.w, j.w) - nb.delta) <= 1e-10); // unit ruling
        CHECK(std::fabs(mink_dot(j.w1, j.w1) - nb.mu) <= 1e-9);   // unit speed
        CHECK(sc.kappa_g == Approx(0.0).margin(1e-9));
        CHECK(sc.a == Approx(1.0).margin(1e-9));
        CHECK(sc.c == Approx(-sc.ap).margin(1e-7));
        CHECK(std::fabs(sc.Q) > 0.1);
    }

    // (1a): F = 0 and b grows like an exponential: b' = b for the + branch
    // (the projection fixes b = -e^s, still of the displayed c0 e^s shape).
    const RuledNormalization na = normalize_nonlightlike(thnli_1a());
    const double b0 = na.scalars(0.0).b;
    CHECK(std::fabs(b0) == Approx(1.0).margin(1e-9));
    for (double s : {-0.3, 0.1, 0.4}) {
        const NormalizedScalars sc = na.scalars(s);
        CHECK(sc.F == Approx(0.0).margin(1e-9));
        CHECK(sc.b == Approx(b0 * std::exp(s)).margin(1e-8));
    }

    // A chart that is not of the class is rejected.
    CHECK_THROWS_AS(normalize_nonlightlike(*make_family("cyl-circle").ruled), ClassMismatch);

    // A ruling changing causal type cannot be unitized: <w,w> = 1 - s^2 flips
    // sign but w' stays spacelike, so the class check itself reports mixed.
    Curve wbad = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {Jet3::constant(1), js, js * js * 0.2};
    };
    const RuledChart bad = RuledChart::from_curves(constant_curve(MVec{0, 0, 2}), wbad,
                                                   Interval{0.4, 1.6}, Interval{-0.2, 0.2});
    CHECK_THROWS(normalize_nonlightlike(bad));
}

TEST_CASE("thnli closed-form coefficients") {
    // Family (2) with alpha = -eps_region*eps_normal: all five vanish.
    const RuledChart c2 = thnli_2();
    const RuledNormalization n2 = normalize_nonlightlike(c2);
    CHECK(n2.mu == -1);
    const ChartJet2 mid = ruled_jet(c2, 0.0, 0.0);
    const StationaritySigns signs{region_sign(cone_region(mid.X)),
                                  fundamental_forms(mid).eps_normal};
    const double alpha = -signs.eps_region * signs.eps_normal;
    for (double s : c2.s_range.grid(9)) {
        const auto A = thnli_coeffs(n2, s, alpha, signs.beta());
        for (double a : A) CHECK(std::fabs(a) <= 1e-8);
        // Off-family alpha breaks at least one coefficient.
        const auto B = thnli_coeffs(n2, s, alpha + 0.5, signs.beta());
        double mx = 0.0;
        for (double b : B) mx = std::max(mx, std::fabs(b));
        CHECK(mx >= 1e-2);
    }

    // (1a): A4 = kappa_g vanishes identically.
    const RuledNormalization na = normalize_nonlightlike(thnli_1a());
    for (double s : na.chart.s_range.grid(9))
        CHECK(thnli_coeffs(na, s, 1.0, -1)[4] == Approx(0.0).margin(1e-10));

    // Helicoid-like chart at alpha = 1: geodesic ruling (A4 = 0) but A0 != 0.
    const RuledNormalization nh = normalize_nonlightlike(*make_family("helicoid-like").ruled);
    const auto Ah = thnli_coeffs(nh, 0.1, 1.0, -1);
    CHECK(Ah[4] == Approx(0.0).margin(1e-9));
    CHECK(std::fabs(Ah[0]) > 1e-3);
}

TEST_CASE("closed-form coefficients track the extracted polynomial") {
    // On a normalized chart the displayed coefficients equal the cleared
    // polynomial's coefficients up to one overall sign; compare as rays.
    const RuledChart c = thnli_1b();
    const RuledNormalization n = normalize_nonlightlike(c);
    const int er = eps_region_of(c);
    for (double s : {0.8, 1.0, 1.25}) {
        for (double alpha : {0.4, 1.0, 2.3}) {
            const ChartJet2 mid = ruled_jet(n.chart, s, n.chart.t_range.mid());
            const int en = fundamental_forms(mid).eps_normal;
            const int beta = -er * en;
            const auto A = thnli_coeffs(n, s, alpha, beta);
            const TPolynomial P = ruled_stationarity_poly(n.chart, s, alpha, er);
            // Cross-ratio parallelism: A_i P_j = A_j P_i.
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j)
                    CHECK(A[i] * P.coeff[j] ==
                          Approx(A[j] * P.coeff[i]).margin(1e-6));
            // Simultaneous vanishing at the family's alpha only.
            double amax = 0.0, pmax = 0.0;
            for (int i = 0; i < 5; ++i) amax = std::max(amax, std::fabs(A[i]));
            for (int i = 0; i < 5; ++i) pmax = std::max(pmax, std::fabs(P.coeff[i]));
            if (std::fabs(alpha - 1.0) < 1e-9) {
                CHECK(amax <= 1e-8);
                CHECK(pmax <= 1e-8);
            } else {
                CHECK(amax > 1e-4);
                CHECK(pmax > 1e-4);
            }
        }
    }
}

TEST_CASE("lightlike normalization") {
    // The worked examples are already normalized.
    for (const RuledChart& c : {thli_1(), thli_2b()}) {
        const RuledChart n = normalize_lightlike(c);
        for (double s : n.s_range.grid(7)) {
            const RuledJets j = n.jets_fn(s);
            CHECK(mink_dot(j.w1, j.w1) == Approx(1.0).margin(1e-9));
            CHECK(mink_dot(j.g1, j.w1) == Approx(0.0).margin(1e-9));
            CHECK(std::fabs(mink_dot(j.w, j.w)) <= 1e-10);
        }
    }
    // Doubled frequency gets reparametrized to unit speed.
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {cos(js * 2.0), sin(js * 2.0), Jet3::constant(1)};
    };
    Curve g = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {sin(js), -cos(js), Jet3::constant(0.3)};
    };
    const RuledChart cc = RuledChart::from_curves(g, w, Interval{0.2, 1.2}, Interval{-1, 0});
    // Oracle: |w'| = 2 everywhere, so the unit-speed derivative is w'/2.
    const RuledChart nn = normalize_lightlike(cc);
    const RuledJets j = nn.jets_fn(0.7);
    CHECK(mink_dot(j.w1, j.w1) == Approx(1.0).margin(1e-12));
    const CurveJet wj = eval_curve(w, 0.7);
    for (int i = 0; i < 3; ++i) CHECK(j.w1[i] == Approx(wj.d1[i] / 2.0).margin(1e-12));
    CHECK_THROWS_AS(normalize_lightlike(thnli_1a()), ClassMismatch);
}

TEST_CASE("thli closed-form coefficients") {
    // Branch (1): alpha = 2 kills both; alpha = 3 leaves A0 != 0.
    const RuledChart n1 = normalize_lightlike(thli_1());
    for (double s : {-0.6, 0.0, 0.8}) {
        const auto A = thli_coeffs(n1, s, 2.0, -1);
        CHECK(std::fabs(A[0]) <= 1e-8);
        CHECK(std::fabs(A[1]) <= 1e-8);
        CHECK(std::fabs(thli_coeffs(n1, s, 3.0, -1)[0]) > 0.5);
    }
    // Branch (2b): alpha = 4 on the C^- window.
    const RuledChart n2 = normalize_lightlike(thli_2b());
    for (double s : n2.s_range.grid(7)) {
        const auto A = thli_coeffs(n2, s, 4.0, -1);
        CHECK(std::fabs(A[0]) <= 1e-8);
        CHECK(std::fabs(A[1]) <= 1e-8);
    }
}

TEST_CASE("the lightlike identity") {
    // Holds identically on the (2b) example; each factor alone does not vanish.
    const RuledChart c = thli_2b();
    for (double s : c.s_range.grid(11)) {
        CHECK(thli_identity(c, s) == Approx(0.0).margin(1e-9));
        const RuledJets j = c.jets_fn(s);
        CHECK(std::fabs(mink_dot(j.g, j.g)) > 1e-3);
        CHECK(std::fabs(triple(j.w1, j.w, j.g)) > 1e-3);
        CHECK(std::fabs(mink_dot(j.g, j.w)) > 1e-3);
        CHECK(std::fabs(triple(j.g1, j.w, j.g)) > 1e-3);
    }
    // Lightlike line through the origin: the identity holds trivially.
    Curve line = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {js, Jet3::constant(0), js};
    };
    Curve w = [](double s) -> Vec3J {
        const Jet3 js = Jet3::variable(s);
        return {cos(js), sin(js), Jet3::constant(1)};
    };
    const RuledChart lc = RuledChart::from_curves(line, w, Interval{0.5, 1.5}, Interval{-1, 0});
    for (double s : {0.6, 1.0, 1.4}) {
        CHECK(thli_identity(lc, s) == Approx(0.0).margin(1e-12));
        const RuledJets j = lc.jets_fn(s);
        CHECK(std::fabs(triple(j.g1, j.w, j.g)) <= 1e-12);
    }
}

TEST_CASE("classifier on catalog families and controls") {
    {
        const ClassificationReport r = classify_ruled(thnli_1b());
        CHECK(r.verdict == Verdict::Stationary);
        CHECK(r.alpha == Approx(1.0).margin(1e-8));
        CHECK(r.branch == "th-nli-1b");
        CHECK(r.kappa_g_max <= 1e-9);
    }
    {
        const ClassificationReport r = classify_ruled(*make_family("cyl-circle").ruled);
        CHECK(r.ruling == RulingClass::Cylindrical);
        CHECK(r.verdict == Verdict::NotStationary);
    }
    {
        const ClassificationReport r = classify_ruled(*make_family("thnli2-witness").ruled);
        CHECK(r.ruling == RulingClass::NonLightlikeW_LightlikeWp);
        CHECK(r.verdict == Verdict::NotStationary);
    }
    {
        const ClassificationReport r = classify_ruled(*make_family("plane-e1e3").ruled);
        CHECK(r.verdict == Verdict::VectorPlane);
        CHECK(r.indeterminate_alpha);
    }
    {
        const ClassificationReport r = classify_ruled(*make_family("helicoid-like").ruled);
        CHECK(r.verdict == Verdict::NotStationary);
    }
}

TEST_CASE("classification is equivariant under isometries and dilations") {
    for (const char* id : {"thnli-2?c1=0&c2=1", "thli-2b?region=-1", "helicoid-like"}) {
        const RuledChart base = *make_family(id).ruled;
        const ClassificationReport r0 = classify_ruled(base);
        const ClassificationReport r1 = classify_ruled(transformed(base, 0.7, 0.3, 1.7));
        CHECK(r0.verdict == r1.verdict);
        if (r0.verdict == Verdict::Stationary) {
            CHECK(r1.alpha == Approx(r0.alpha).margin(1e-6));
            CHECK(r1.branch == r0.branch);
        }
    }
    // Sanity: the transform really is an isometry times a dilation.
    std::mt19937_64 rng(20250810ULL + 11);
    std::uniform_real_distribution<double> d(-2, 2);
    for (int i = 0; i < 50; ++i) {
        const MVec v{d(rng), d(rng), d(rng)};
        const MVec tv = isometry(v, 0.7, 0.3);
        CHECK(mink_dot(tv, tv) == Approx(mink_dot(v, v)).margin(1e-12));
    }
}
