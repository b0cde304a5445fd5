#pragma once
#include <algorithm>
#include <cstddef>
#include <memory>
#include <vector>

#include "minkstat/errors.hpp"
#include "minkstat/jets.hpp"

namespace minkstat {

/**
 * C^2 cubic interpolating spline with not-a-knot end conditions (exact on
 * cubic polynomials, no artificial end flattening). Stores second-derivative
 * moments; evaluation returns value through third derivative, which is what
 * sampled-curve charts need for their jets.
 */
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 4) throw InvalidArgument("CubicSpline: need at least 4 samples");
        if (y_.size() != n) throw InvalidArgument("CubicSpline: x/y size mismatch");
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (!(x_[i] < x_[i + 1]))
                throw InvalidArgument("CubicSpline: abscissae must be strictly increasing");
        solve_moments();
    }

    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

    /// Value and first three derivatives at x (end cubics extrapolate).
    Jet3 eval(double x) const {
        const std::size_t i = interval(x);
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - x) / h;
        const double b = (x - x_[i]) / h;
        Jet3 out;
        out.f = m_[i] * a * a * a * h * h / 6.0 + m_[i + 1] * b * b * b * h * h / 6.0 +
                (y_[i] - m_[i] * h * h / 6.0) * a + (y_[i + 1] - m_[i + 1] * h * h / 6.0) * b;
        out.f1 = -m_[i] * a * a * h / 2.0 + m_[i + 1] * b * b * h / 2.0 +
                 (y_[i + 1] - y_[i]) / h - (m_[i + 1] - m_[i]) * h / 6.0;
        out.f2 = m_[i] * a + m_[i + 1] * b;
        out.f3 = (m_[i + 1] - m_[i]) / h;
        return out;
    }

private:
    std::size_t interval(double x) const {
        auto it = std::upper_bound(x_.begin(), x_.end(), x);
        std::size_t i = static_cast<std::size_t>(std::distance(x_.begin(), it));
        if (i == 0) return 0;
        if (i >= x_.size()) return x_.size() - 2;
        return i - 1;
    }

    void solve_moments() {
        const std::size_t n = x_.size();
        std::vector<double> h(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

        // Interior equations for moments M_1..M_{n-2}, with M_0 and M_{n-1}
        // eliminated through the not-a-knot relations
        //   M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2,
        //   M_{n-1} = (1 + h_{n-2}/h_{n-3}) M_{n-2} - (h_{n-2}/h_{n-3}) M_{n-3}.
        const std::size_t m = n - 2;
        std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0), rhs(m);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const std::size_t r = i - 1;
            rhs[r] = (y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1];
            lo[r] = h[i - 1] / 6.0;
            di[r] = (h[i - 1] + h[i]) / 3.0;
            up[r] = h[i] / 6.0;
        }
        {
            const double r0 = h[0] / h[1];
            di[0] += lo[0] * (1.0 + r0);
            up[0] -= lo[0] * r0;
            lo[0] = 0.0;
        }
        {
            const double r1 = h[n - 2] / h[n - 3];
            di[m - 1] += up[m - 1] * (1.0 + r1);
            lo[m - 1] -= up[m - 1] * r1;
            up[m - 1] = 0.0;
        }

        // Thomas elimination.
        for (std::size_t r = 1; r < m; ++r) {
            const double w = lo[r] / di[r - 1];
            di[r] -= w * up[r - 1];
            rhs[r] -= w * rhs[r - 1];
        }
        std::vector<double> mid(m);
        mid[m - 1] = rhs[m - 1] / di[m - 1];
        for (std::size_t r = m - 1; r-- > 0;) mid[r] = (rhs[r] - up[r] * mid[r + 1]) / di[r];

        m_.assign(n, 0.0);
        for (std::size_t r = 0; r < m; ++r) m_[r + 1] = mid[r];
        m_[0] = (1.0 + h[0] / h[1]) * m_[1] - (h[0] / h[1]) * m_[2];
        m_[n - 1] = (1.0 + h[n - 2] / h[n - 3]) * m_[n - 2] - (h[n - 2] / h[n - 3]) * m_[n - 3];
    }

    std::vector<double> x_, y_;
    std::vector<double> m_;  // second-derivative moments
};

/// Component-wise spline interpolation of a sampled space curve.
inline Curve spline_curve(const std::vector<double>& s,
                          const std::vector<MVec>& points) {
    if (points.size() != s.size())
        throw InvalidArgument("spline_curve: sample count mismatch");
    std::vector<double> cx, cy, cz;
    cx.reserve(s.size());
    cy.reserve(s.size());
    cz.reserve(s.size());
    for (const MVec& p : points) {
        if (p.dim() != 3) throw DimensionMismatch("spline_curve requires dim = 3");
        cx.push_back(p[0]);
        cy.push_back(p[1]);
        cz.push_back(p[2]);
    }
    auto sx = std::make_shared<CubicSpline>(s, cx);
    auto sy = std::make_shared<CubicSpline>(s, cy);
    auto sz = std::make_shared<CubicSpline>(s, cz);
    return [sx, sy, sz](double u) -> Vec3J {
        return {sx->eval(u), sy->eval(u), sz->eval(u)};
    };
}

} // namespace minkstat
