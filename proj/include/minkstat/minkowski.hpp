#pragma once
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "minkstat/errors.hpp"

namespace minkstat {

/// Default relative tolerance for causal / cone-region classification bands.
inline constexpr double kCausalTol = 1e-9;

/**
 * Point or vector of L^{n+1} with signature (+,...,+,-).
 * The last coordinate is the timelike one; dim = n+1 >= 2.
 */
class MVec {
public:
    MVec() = default;

    MVec(std::initializer_list<double> xs) : comps_(xs) { validate(); }

    explicit MVec(std::vector<double> xs) : comps_(std::move(xs)) { validate(); }

    static MVec zero(std::size_t dim) { return MVec(std::vector<double>(dim, 0.0)); }

    std::size_t dim() const { return comps_.size(); }

    double operator[](std::size_t i) const { return comps_[i]; }
    double& operator[](std::size_t i) { return comps_[i]; }

    const std::vector<double>& components() const { return comps_; }

    MVec operator+(const MVec& o) const {
        check_same_dim(o);
        MVec r = *this;
        for (std::size_t i = 0; i < dim(); ++i) r.comps_[i] += o.comps_[i];
        return r;
    }

    MVec operator-(const MVec& o) const {
        check_same_dim(o);
        MVec r = *this;
        for (std::size_t i = 0; i < dim(); ++i) r.comps_[i] -= o.comps_[i];
        return r;
    }

    MVec operator*(double c) const {
        MVec r = *this;
        for (double& x : r.comps_) x *= c;
        return r;
    }

    MVec operator-() const { return *this * -1.0; }

    bool is_zero() const {
        for (double x : comps_)
            if (x != 0.0) return false;
        return true;
    }

    /// Squared Euclidean norm (all signs +), used for relative tolerance scales.
    double euclid_norm2() const {
        double s = 0.0;
        for (double x : comps_) s += x * x;
        return s;
    }

    double euclid_norm() const { return std::sqrt(euclid_norm2()); }

private:
    void validate() const {
        if (comps_.size() < 2)
            throw InvalidArgument("MVec requires dim >= 2, got " + std::to_string(comps_.size()));
        for (double x : comps_)
            if (!std::isfinite(x)) throw InvalidArgument("MVec components must be finite");
    }

    void check_same_dim(const MVec& o) const {
        if (dim() != o.dim())
            throw DimensionMismatch("MVec dimension mismatch: " + std::to_string(dim()) +
                                    " vs " + std::to_string(o.dim()));
    }

    std::vector<double> comps_;
};

inline MVec operator*(double c, const MVec& v) { return v * c; }

enum class CausalClass { Spacelike, Timelike, Lightlike, ZeroVector };

inline const char* to_string(CausalClass c) {
    switch (c) {
        case CausalClass::Spacelike: return "spacelike";
        case CausalClass::Timelike: return "timelike";
        case CausalClass::Lightlike: return "lightlike";
        case CausalClass::ZeroVector: return "zero";
    }
    return "?";
}

enum class ConeRegion { CPlus, CMinus, OnCone };

inline const char* to_string(ConeRegion r) {
    switch (r) {
        case ConeRegion::CPlus: return "C+";
        case ConeRegion::CMinus: return "C-";
        case ConeRegion::OnCone: return "cone";
    }
    return "?";
}

/// Sign epsilon of a region: +1 on C^+, -1 on C^-.
inline int region_sign(ConeRegion r) {
    if (r == ConeRegion::CPlus) return 1;
    if (r == ConeRegion::CMinus) return -1;
    throw OnConeError("region_sign undefined on the lightlike cone");
}

/// <u,v> = sum_{i<n} u_i v_i - u_n v_n.
inline double mink_dot(const MVec& u, const MVec& v) {
    if (u.dim() != v.dim())
        throw DimensionMismatch("mink_dot: dimension mismatch");
    double s = 0.0;
    const std::size_t n = u.dim() - 1;
    for (std::size_t i = 0; i < n; ++i) s += u[i] * v[i];
    return s - u[n] * v[n];
}

/// |p| = sqrt(|<p,p>|); zero exactly on the cone.
inline double mink_norm(const MVec& p) { return std::sqrt(std::fabs(mink_dot(p, p))); }

inline CausalClass causal_class(const MVec& v, double tol = kCausalTol) {
    if (tol <= 0.0) throw InvalidArgument("causal_class: tol must be > 0");
    if (v.is_zero()) return CausalClass::ZeroVector;
    const double q = mink_dot(v, v);
    const double band = tol * v.euclid_norm2();
    if (q > band) return CausalClass::Spacelike;
    if (q < -band) return CausalClass::Timelike;
    return CausalClass::Lightlike;
}

inline ConeRegion cone_region(const MVec& p, double tol = kCausalTol) {
    if (tol <= 0.0) throw InvalidArgument("cone_region: tol must be > 0");
    const double q = mink_dot(p, p);
    const double band = tol * p.euclid_norm2();
    if (q < -band) return ConeRegion::CPlus;
    if (q > band) return ConeRegion::CMinus;
    return ConeRegion::OnCone;
}

/// Scalar triple product in L^3: det of the matrix with rows u, v, w.
inline double triple(const MVec& u, const MVec& v, const MVec& w) {
    if (u.dim() != 3 || v.dim() != 3 || w.dim() != 3)
        throw DimensionMismatch("triple requires dim = 3");
    return u[0] * (v[1] * w[2] - v[2] * w[1]) -
           u[1] * (v[0] * w[2] - v[2] * w[0]) +
           u[2] * (v[0] * w[1] - v[1] * w[0]);
}

/**
 * Lorentzian cross product: the unique z with <z,x> = (u,v,x) for all x.
 * Equivalently the Euclidean cross product with the timelike component negated,
 * which makes the orientation convention self-consistent with triple().
 */
inline MVec lorentz_cross(const MVec& u, const MVec& v) {
    if (u.dim() != 3 || v.dim() != 3)
        throw DimensionMismatch("lorentz_cross requires dim = 3");
    return MVec{u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                -(u[0] * v[1] - u[1] * v[0])};
}

/// phi(p) = p / <p,p>, an involution off the cone preserving C^+ and C^-.
inline MVec inversion(const MVec& p, double tol = kCausalTol) {
    if (cone_region(p, tol) == ConeRegion::OnCone)
        throw OnConeError("inversion: point inside the lightlike-cone band");
    return p * (1.0 / mink_dot(p, p));
}

/**
 * Exact derivative of the inversion map at p applied to v:
 *   dphi_p(v) = v/<p,p> - 2 <p,v>/<p,p>^2 p.
 * Conformal with factor 1/<p,p>^2: <dphi v, dphi v> = <v,v>/<p,p>^2.
 */
inline MVec inversion_differential(const MVec& p, const MVec& v, double tol = kCausalTol) {
    if (cone_region(p, tol) == ConeRegion::OnCone)
        throw OnConeError("inversion_differential: point inside the lightlike-cone band");
    const double q = mink_dot(p, p);
    return v * (1.0 / q) - p * (2.0 * mink_dot(p, v) / (q * q));
}

/**
 * True iff every p satisfies sum_i x_i^2 - (x_{dim} - delta)^2 < 0, i.e. the
 * set lies inside the shifted cone with vertex (0,...,0,delta).
 */
inline bool far_from_cone(std::span<const MVec> points, double delta) {
    if (delta <= 0.0) throw InvalidArgument("far_from_cone: delta must be > 0");
    for (const MVec& p : points) {
        const std::size_t n = p.dim() - 1;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i] * p[i];
        const double dt = p[n] - delta;
        if (s - dt * dt >= 0.0) return false;
    }
    return true;
}

inline bool far_from_cone(const std::vector<MVec>& points, double delta) {
    return far_from_cone(std::span<const MVec>(points.data(), points.size()), delta);
}

} // namespace minkstat
