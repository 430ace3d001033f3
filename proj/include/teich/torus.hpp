#pragma once

// Flat-torus model of Teichmueller space. A point is the modulus tau = x + iy
// of the lattice Z + tau Z; the slope (p, q) is the curve in the homology class
// of the lattice vector omega = p + q tau.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "teich/farey.hpp"
#include "teich/quadform.hpp"
#include "teich/supratio.hpp"

namespace teich::torus {

using cplx = std::complex<double>;

struct TorusPoint {
    double x = 0.0;
    double y = 1.0;

    static TorusPoint make(double x, double y)
    {
        if (!std::isfinite(x) || !std::isfinite(y) || !(y > 0.0)) {
            throw std::domain_error("torus point requires finite x and y > 0");
        }
        return {x, y};
    }
    cplx tau() const { return {x, y}; }
    friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

struct WeightedFoliation {
    double weight = 1.0;
    Slope slope{1, 0};
};

/// Coordinate velocity d tau / dt = vx + i vy.
struct TangentVector {
    double vx = 0.0;
    double vy = 0.0;

    double norm() const { return std::hypot(vx, vy); }
    friend TangentVector operator+(TangentVector a, TangentVector b) { return {a.vx + b.vx, a.vy + b.vy}; }
    friend TangentVector operator*(double s, TangentVector v) { return {s * v.vx, s * v.vy}; }
};

struct Covector {
    double gx = 0.0;
    double gy = 0.0;

    double operator()(const TangentVector& v) const { return gx * v.vx + gy * v.vy; }
};

/// Constant quadratic differential c dz^2 on the torus at base.
struct QuadDiff {
    cplx c;
    TorusPoint base;

    /// L1 norm: |c| times the area y of a fundamental domain.
    double norm() const { return std::abs(c) * base.y; }
};

/// Extremal length as a quadratic form in (p, q): |p + q tau|^2 / y.
inline Sym2 extremal_form(const TorusPoint& t)
{
    return {1.0 / t.y, t.x / t.y, (t.x * t.x + t.y * t.y) / t.y};
}

/// Directional derivative of extremal_form along v.
inline Sym2 extremal_form_derivative(const TorusPoint& t, const TangentVector& v)
{
    const double y2 = t.y * t.y;
    const Sym2 dx{0.0, 1.0 / t.y, 2.0 * t.x / t.y};
    const Sym2 dy{-1.0 / y2, -t.x / y2, 1.0 - t.x * t.x / y2};
    return v.vx * dx + v.vy * dy;
}

inline double extremal_length(const WeightedFoliation& f, const TorusPoint& t)
{
    const double p = static_cast<double>(f.slope.p);
    const double q = static_cast<double>(f.slope.q);
    const double re = p + q * t.x;
    const double im = q * t.y;
    return f.weight * f.weight * (re * re + im * im) / t.y;
}

/// Gradient of extremal_length in (x, y).
inline Covector d_extremal(const WeightedFoliation& f, const TorusPoint& t)
{
    const double a2 = f.weight * f.weight;
    const double p = static_cast<double>(f.slope.p);
    const double q = static_cast<double>(f.slope.q);
    const double re = p + q * t.x;
    return {2.0 * a2 * q * re / t.y, a2 * (q * q - re * re / (t.y * t.y))};
}

/// The quadratic differential whose vertical foliation is the weighted
/// foliation: leaves parallel to omega, and norm equal to the extremal length.
/// c omega^2 < 0 fixes the phase and |c| y = a^2 |omega|^2 / y fixes the size,
/// giving c = -a^2 conj(omega)^2 / y^2.
inline QuadDiff quad_diff_of_foliation(const WeightedFoliation& f, const TorusPoint& t)
{
    const cplx omega = static_cast<double>(f.slope.p) + static_cast<double>(f.slope.q) * t.tau();
    const double a2 = f.weight * f.weight;
    return {-a2 * std::conj(omega) * std::conj(omega) / (t.y * t.y), t};
}

/// Beltrami coefficient of the affine deformation with velocity v. The affine
/// map fixing 1 and sending tau to tau + s v has dilatation
/// (tau' - tau) / (conj(tau) - tau), whose derivative in s is i v / (2 y).
inline cplx beltrami_of_tangent(const TangentVector& v, const TorusPoint& t)
{
    return cplx{0.0, 1.0} * cplx{v.vx, v.vy} / (2.0 * t.y);
}

/// First variation of extremal length: -2 Re <Phi, mu> with
/// <Phi, mu> = integral of Phi mu over a fundamental domain.
inline double gardiner_pairing(const QuadDiff& phi, const TangentVector& v, const TorusPoint& t)
{
    if (!(phi.base == t)) {
        throw std::invalid_argument("gardiner_pairing: quadratic differential lives at another point");
    }
    const cplx mu = beltrami_of_tangent(v, t);
    const cplx pairing = phi.c * mu * t.y;
    return -2.0 * pairing.real();
}

/// Half the curvature -1 hyperbolic distance in the upper half-plane.
inline double teich_distance_oracle(const TorusPoint& a, const TorusPoint& b)
{
    const double chord = std::abs(a.tau() - b.tau());
    return std::asinh(chord / (2.0 * std::sqrt(a.y * b.y)));
}

/// Half the log of the largest generalized eigenvalue of the two extremal
/// length forms; a second closed form for the same distance.
inline double teich_distance_eigen(const TorusPoint& a, const TorusPoint& b)
{
    const auto ex = generalized_eigen(extremal_form(b), extremal_form(a));
    return 0.5 * std::log(ex.max);
}

struct EnumLimits {
    int max_depth = 4096;
    std::int64_t max_evals = 2'000'000;
};

/// Sup over slopes of Ext(b)/Ext(a), certified with the cone bound on the
/// ratio of the two quadratic forms. Half the log of value is the distance.
inline SupRatioResult teich_distance_enum(const TorusPoint& a, const TorusPoint& b, double tol = 1e-6,
                                          EnumLimits lim = {})
{
    const Sym2 from = extremal_form(a);
    const Sym2 to = extremal_form(b);
    SupQuery q;
    q.objective = [from, to](const Slope& s) { return to(s) / from(s); };
    q.subtree_bound = [from, to](const FareyNode& n) { return cone_ratio_bound(to, from, n); };
    q.bound_is_sound = true;
    q.tolerance = tol;
    q.max_depth = lim.max_depth;
    q.max_evals = lim.max_evals;
    return maximize(q);
}

struct TeichNorm {
    double value = 0.0;
    /// Certified supremum over rational slopes.
    SupRatioResult rational;
    /// Closed-form maximum over all real directions.
    double circle_max = 0.0;
};

/// sup over foliations of d Ext^{1/2}(v) / Ext^{1/2} = (1/2) dExt(v) / Ext.
inline TeichNorm teich_norm_detail(const TorusPoint& t, const TangentVector& v, double tol = 1e-6,
                                   EnumLimits lim = {})
{
    const Sym2 den = extremal_form(t);
    const Sym2 num = 0.5 * extremal_form_derivative(t, v);
    SupQuery q;
    q.objective = [num, den](const Slope& s) { return num(s) / den(s); };
    q.subtree_bound = [num, den](const FareyNode& n) { return cone_ratio_bound(num, den, n); };
    q.bound_is_sound = true;
    q.tolerance = tol;
    q.max_depth = lim.max_depth;
    q.max_evals = lim.max_evals;
    TeichNorm out;
    out.rational = maximize(q);
    out.circle_max = generalized_eigen(num, den).max;
    out.value = std::max(out.rational.value, out.circle_max);
    return out;
}

inline double teich_norm(const TorusPoint& t, const TangentVector& v, double tol = 1e-6)
{
    return teich_norm_detail(t, v, tol).value;
}

struct DualSample {
    Covector g;
    /// Angle of the leaf direction omega in the flat metric, in [0, pi).
    double angle = 0.0;
    /// Set when the direction is a slope with small entries.
    std::optional<Slope> slope;
};

namespace detail {

inline std::optional<Slope> small_slope(double p, double q, std::int64_t max_entry = 64)
{
    // Continued fraction of p/q (or q/p) with a tight acceptance test.
    const bool flip = std::abs(p) > std::abs(q);
    double num = flip ? q : p;
    double den = flip ? p : q;
    if (den == 0.0) {
        return std::nullopt;
    }
    const double target = num / den;
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double r = target;
    for (int i = 0; i < 32; ++i) {
        const double a = std::floor(r);
        if (std::abs(a) > static_cast<double>(max_entry)) {
            break;
        }
        const auto ai = static_cast<std::int64_t>(a);
        const std::int64_t h2 = ai * h1 + h0;
        const std::int64_t k2 = ai * k1 + k0;
        if (std::abs(h2) > max_entry || std::abs(k2) > max_entry) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - target) <= 1e-12) {
            return flip ? Slope::make(k1, h1) : Slope::make(h1, k1);
        }
        const double frac = r - a;
        if (frac == 0.0) {
            break;
        }
        r = 1.0 / frac;
    }
    return std::nullopt;
}

} // namespace detail

/// Samples the image of {Ext = 1} under foliation -> dExt at n evenly spaced
/// leaf directions. Real directions use the continuous extension
/// Ext(p, q) = |p + q tau|^2 / y of the rational formula.
inline std::vector<DualSample> dual_sphere(const TorusPoint& t, int n)
{
    if (n < 16) {
        throw std::invalid_argument("dual_sphere: at least 16 samples are required");
    }
    std::vector<DualSample> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
        // omega = p + q tau = e^{i phi}
        const double q = std::sin(phi) / t.y;
        const double p = std::cos(phi) - q * t.x;
        const Sym2 form = extremal_form(t);
        const double scale = 1.0 / std::sqrt(form(p, q)); // normalize to Ext = 1
        const double ps = scale * p;
        const double qs = scale * q;
        const double re = ps + qs * t.x;
        DualSample s;
        s.g = {2.0 * qs * re / t.y, qs * qs - re * re / (t.y * t.y)};
        s.angle = phi;
        s.slope = detail::small_slope(p, q);
        out.push_back(s);
    }
    return out;
}

/// max over samples of g(v).
inline double support_function(const std::vector<DualSample>& sphere, const TangentVector& v)
{
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : sphere) {
        best = std::max(best, s.g(v));
    }
    return best;
}

/// Ext^{1/2}(t) / K^{1/2} with K = exp(2 d_T(base, t)).
inline double normalized_extremal_functional(const TorusPoint& base, const TorusPoint& t,
                                             const WeightedFoliation& f)
{
    return std::sqrt(extremal_length(f, t)) / std::exp(teich_distance_oracle(base, t));
}

} // namespace teich::torus
