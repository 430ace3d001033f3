#pragma once

// Once-punctured torus in Fricke trace coordinates. A point is a triple of
// traces (x, y, z) of generators A, B and AB of a cusped punctured-torus group,
// on the Markov cubic x^2 + y^2 + z^2 = xyz. The base slopes are
// (1,0) -> x, (0,1) -> y, (1,1) -> z; across a Farey edge (a, b) with opposite
// vertex c the new trace is t_a t_b - t_c.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "teich/farey.hpp"
#include "teich/supratio.hpp"

namespace teich::ptorus {

/// Scale-free residual |x^2 + y^2 + z^2 - xyz| / (xyz).
inline double markov_residual(double x, double y, double z)
{
    return std::abs(x * x + y * y + z * z - x * y * z) / (x * y * z);
}

inline constexpr double kMarkovTolerance = 1e-9;
inline constexpr double kCuspMargin = 1e-12;

struct MarkovPoint {
    double x = 3.0;
    double y = 3.0;
    double z = 3.0;

    static MarkovPoint make(double x, double y, double z)
    {
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
            throw std::overflow_error("Markov point has non-finite coordinates");
        }
        if (x <= 2.0 + kCuspMargin || y <= 2.0 + kCuspMargin || z <= 2.0 + kCuspMargin) {
            throw std::domain_error("Markov point needs every trace > 2 (cusp or degenerate point)");
        }
        if (markov_residual(x, y, z) > kMarkovTolerance) {
            throw std::domain_error("point is off the Markov cubic (relative residual " +
                                    std::to_string(markov_residual(x, y, z)) + ")");
        }
        return {x, y, z};
    }

    double residual() const { return markov_residual(x, y, z); }
    friend bool operator==(const MarkovPoint&, const MarkovPoint&) = default;
};

enum class Branch { upper, lower };

/// Chart (x, y) -> (x, y, z) with z a root of z^2 - xyz + x^2 + y^2 = 0;
/// the upper branch takes the larger root.
inline MarkovPoint from_parameters(double x, double y, Branch branch = Branch::upper)
{
    if (!(x > 2.0) || !(y > 2.0)) {
        throw std::domain_error("chart point out of range: need x > 2 and y > 2");
    }
    const double disc = x * x * y * y - 4.0 * (x * x + y * y);
    if (disc < 0.0) {
        throw std::domain_error("chart point out of chart: x^2 y^2 < 4 (x^2 + y^2)");
    }
    const double s = std::sqrt(disc);
    const double big = 0.5 * (x * y + s);
    // Product of roots is x^2 + y^2.
    const double z = branch == Branch::upper ? big : (x * x + y * y) / big;
    return MarkovPoint::make(x, y, z);
}

inline Branch branch_of(const MarkovPoint& m)
{
    return 2.0 * m.z >= m.x * m.y ? Branch::upper : Branch::lower;
}

/// Tangent vector to the Markov cubic in ambient coordinates.
struct PTTangent {
    double wx = 0.0;
    double wy = 0.0;
    double wz = 0.0;

    friend PTTangent operator+(PTTangent a, PTTangent b) { return {a.wx + b.wx, a.wy + b.wy, a.wz + b.wz}; }
    friend PTTangent operator*(double s, PTTangent v) { return {s * v.wx, s * v.wy, s * v.wz}; }
    friend PTTangent operator-(PTTangent v) { return {-v.wx, -v.wy, -v.wz}; }
};

/// Gradient of x^2 + y^2 + z^2 - xyz.
inline std::array<double, 3> markov_normal(const MarkovPoint& m)
{
    return {2.0 * m.x - m.y * m.z, 2.0 * m.y - m.x * m.z, 2.0 * m.z - m.x * m.y};
}

inline double tangency_residual(const MarkovPoint& m, const PTTangent& v)
{
    const auto n = markov_normal(m);
    return n[0] * v.wx + n[1] * v.wy + n[2] * v.wz;
}

/// Lifts a chart velocity (dx, dy) to the cubic by implicit differentiation.
inline PTTangent lift_tangent(const MarkovPoint& m, double dx, double dy)
{
    const auto n = markov_normal(m);
    if (std::abs(n[2]) <= 1e-12 * (m.x * m.y)) {
        throw std::domain_error("chart is singular at this point (2z = xy)");
    }
    return {dx, dy, -(n[0] * dx + n[1] * dy) / n[2]};
}

/// Point with chart coordinates (x, y) on the same branch as m.
inline MarkovPoint chart_point(const MarkovPoint& m, double x, double y)
{
    return from_parameters(x, y, branch_of(m));
}

/// Trace of a slope's geodesic with its gradient in (x, y, z). Stored as
/// log t and grad(t)/t, since traces grow doubly exponentially with depth.
struct TraceJet {
    double log_t = 0.0;
    std::array<double, 3> dlog{};

    double t() const { return std::exp(log_t); }
    std::array<double, 3> grad() const
    {
        const double tv = t();
        return {tv * dlog[0], tv * dlog[1], tv * dlog[2]};
    }
};

struct WeightedLamination {
    double weight = 1.0;
    Slope slope{1, 0};
};

namespace detail {

// Plain-value jet: trace and N directional derivatives.
template <std::size_t N>
struct PlainJet {
    double t;
    std::array<double, N> d;
};

// Log-scaled jet: log trace and N derivatives of log trace.
template <std::size_t N>
struct LogJet {
    double lt;
    std::array<double, N> g;
};

inline constexpr double kPlainLimit = 1e150;

template <std::size_t N>
struct PlainCombine {
    bool overflow = false;
    PlainJet<N> operator()(const PlainJet<N>& l, const PlainJet<N>& r, const PlainJet<N>& c)
    {
        PlainJet<N> m;
        m.t = l.t * r.t - c.t;
        for (std::size_t i = 0; i < N; ++i) {
            m.d[i] = l.d[i] * r.t + l.t * r.d[i] - c.d[i];
        }
        if (!(m.t < kPlainLimit)) {
            overflow = true;
        }
        return m;
    }
};

template <std::size_t N>
struct LogCombine {
    LogJet<N> operator()(const LogJet<N>& l, const LogJet<N>& r, const LogJet<N>& c) const
    {
        const double log_ratio = c.lt - l.lt - r.lt; // log(t_c / (t_l t_r))
        LogJet<N> m;
        if (log_ratio < -40.0) {
            // the correction is below double precision of the sum
            m.lt = l.lt + r.lt;
            for (std::size_t i = 0; i < N; ++i) {
                m.g[i] = l.g[i] + r.g[i];
            }
            return m;
        }
        const double ratio = std::exp(log_ratio);
        if (!(ratio < 1.0)) {
            throw std::domain_error("trace recursion left the Fuchsian locus");
        }
        m.lt = l.lt + r.lt + std::log1p(-ratio);
        const double a = 1.0 / (1.0 - ratio);
        const double b = ratio / (1.0 - ratio);
        for (std::size_t i = 0; i < N; ++i) {
            m.g[i] = a * (l.g[i] + r.g[i]) - b * c.g[i];
        }
        return m;
    }
};

/// Walks the Stern-Brocot path to s, applying the trace recursion.
/// base = values at slopes (1,0), (0,1), (1,1).
template <class V, class Combine>
V descend(const Slope& s_in, const V& vx, const V& vy, const V& vz, Combine& comb)
{
    const Slope s = s_in.canonical();
    if (!s.is_canonical()) {
        throw std::invalid_argument("slope " + s_in.str() + " is not primitive");
    }
    if (s == Slope{1, 0}) {
        return vx;
    }
    if (s == Slope{0, 1}) {
        return vy;
    }
    if (s == Slope{1, 1}) {
        return vz;
    }
    Slope L, R;
    V tl = vx, tr = vx, tc = vx;
    if (s.p < 0) {
        L = {-1, 0}; R = {0, 1}; tl = vx; tr = vy; tc = vz;
    } else if (s.p < s.q) {
        L = {0, 1}; R = {1, 1}; tl = vy; tr = vz; tc = vx;
    } else {
        L = {1, 1}; R = {1, 0}; tl = vz; tr = vx; tc = vy;
    }
    for (;;) {
        const Slope m{teich::detail::checked_add(L.p, R.p), teich::detail::checked_add(L.q, R.q)};
        V tm = comb(tl, tr, tc);
        if (m == s) {
            return tm;
        }
        if (teich::detail::cross(s.p, s.q, m.p, m.q) < 0) {
            tc = tr;
            tr = tm;
            R = m;
        } else {
            tc = tl;
            tl = tm;
            L = m;
        }
    }
}

template <std::size_t N>
LogJet<N> to_log(const PlainJet<N>& j)
{
    LogJet<N> out;
    out.lt = std::log(j.t);
    for (std::size_t i = 0; i < N; ++i) {
        out.g[i] = j.d[i] / j.t;
    }
    return out;
}

/// Trace jet of s given the jets of the base slopes, in log form.
template <std::size_t N>
LogJet<N> trace_jet(const Slope& s, const PlainJet<N>& jx, const PlainJet<N>& jy, const PlainJet<N>& jz)
{
    PlainCombine<N> plain;
    const PlainJet<N> fast = descend(s, jx, jy, jz, plain);
    if (!plain.overflow && std::isfinite(fast.t)) {
        return to_log(fast);
    }
    LogCombine<N> logc;
    return descend(s, to_log(jx), to_log(jy), to_log(jz), logc);
}

// Traces of one slope at two points, walked together.
struct PairCombine {
    bool overflow = false;
    std::array<double, 2> operator()(const std::array<double, 2>& l, const std::array<double, 2>& r,
                                     const std::array<double, 2>& c)
    {
        const std::array<double, 2> m{l[0] * r[0] - c[0], l[1] * r[1] - c[1]};
        if (!(m[0] < kPlainLimit) || !(m[1] < kPlainLimit)) {
            overflow = true;
        }
        return m;
    }
};

struct PairLogCombine {
    std::array<double, 2> operator()(const std::array<double, 2>& l, const std::array<double, 2>& r,
                                     const std::array<double, 2>& c) const
    {
        std::array<double, 2> m{};
        for (std::size_t i = 0; i < 2; ++i) {
            const double log_ratio = c[i] - l[i] - r[i];
            if (log_ratio < -40.0) {
                m[i] = l[i] + r[i];
                continue;
            }
            const double ratio = std::exp(log_ratio);
            if (!(ratio < 1.0)) {
                throw std::domain_error("trace recursion left the Fuchsian locus");
            }
            m[i] = l[i] + r[i] + std::log1p(-ratio);
        }
        return m;
    }
};

/// log traces of s at points a and b.
inline std::array<double, 2> log_trace_pair(const Slope& s, const MarkovPoint& a, const MarkovPoint& b)
{
    PairCombine plain;
    const std::array<double, 2> fast = descend(s, std::array<double, 2>{a.x, b.x}, std::array<double, 2>{a.y, b.y},
                                               std::array<double, 2>{a.z, b.z}, plain);
    if (!plain.overflow && std::isfinite(fast[0]) && std::isfinite(fast[1])) {
        return {std::log(fast[0]), std::log(fast[1])};
    }
    PairLogCombine logc;
    auto lg = [](double u, double v) { return std::array<double, 2>{std::log(u), std::log(v)}; };
    return descend(s, lg(a.x, b.x), lg(a.y, b.y), lg(a.z, b.z), logc);
}

/// Hyperbolic length 2 arccosh(t/2) from log t.
inline double length_from_log_trace(double lt)
{
    if (!(lt > std::log(2.0))) {
        throw std::domain_error("trace <= 2: the point is not Fuchsian");
    }
    if (lt < 30.0) {
        return 2.0 * std::acosh(0.5 * std::exp(lt));
    }
    const double u = 4.0 * std::exp(-2.0 * lt); // 4 / t^2
    return 2.0 * (lt + std::log(0.5 * (1.0 + std::sqrt(1.0 - u))));
}

/// d(length)/d(log t) = 2 t / sqrt(t^2 - 4).
inline double length_log_derivative(double lt)
{
    const double u = 4.0 * std::exp(-2.0 * lt);
    if (!(u < 1.0)) {
        throw std::domain_error("trace <= 2: the point is not Fuchsian");
    }
    return 2.0 / std::sqrt(1.0 - u);
}

} // namespace detail

/// Trace of the geodesic in class s, with exact gradient in (x, y, z).
inline TraceJet trace_of_slope(const MarkovPoint& m, const Slope& s)
{
    const detail::PlainJet<3> jx{m.x, {1.0, 0.0, 0.0}};
    const detail::PlainJet<3> jy{m.y, {0.0, 1.0, 0.0}};
    const detail::PlainJet<3> jz{m.z, {0.0, 0.0, 1.0}};
    const auto j = detail::trace_jet<3>(s, jx, jy, jz);
    return {j.lt, j.g};
}

/// Hyperbolic length of the simple closed geodesic with slope s.
inline double slope_length(const MarkovPoint& m, const Slope& s)
{
    const detail::PlainJet<0> jx{m.x, {}};
    const detail::PlainJet<0> jy{m.y, {}};
    const detail::PlainJet<0> jz{m.z, {}};
    return detail::length_from_log_trace(detail::trace_jet<0>(s, jx, jy, jz).lt);
}

/// Length of s and its derivative along v.
struct DirectionalLength {
    double length;
    double derivative;
};

inline DirectionalLength slope_length_along(const MarkovPoint& m, const Slope& s, const PTTangent& v)
{
    const detail::PlainJet<1> jx{m.x, {v.wx}};
    const detail::PlainJet<1> jy{m.y, {v.wy}};
    const detail::PlainJet<1> jz{m.z, {v.wz}};
    const auto j = detail::trace_jet<1>(s, jx, jy, jz);
    return {detail::length_from_log_trace(j.lt), detail::length_log_derivative(j.lt) * j.g[0]};
}

inline double length(const MarkovPoint& m, const WeightedLamination& l)
{
    return l.weight * slope_length(m, l.slope);
}

/// Differential of length as a covector on ambient tangent vectors.
inline std::array<double, 3> d_length(const MarkovPoint& m, const WeightedLamination& l)
{
    const TraceJet j = trace_of_slope(m, l.slope);
    const double k = l.weight * detail::length_log_derivative(j.log_t);
    return {k * j.dlog[0], k * j.dlog[1], k * j.dlog[2]};
}

struct SearchLimits {
    int max_depth = 14;
    std::int64_t max_evals = 50'000'000;
};

/// Sup over slopes of length_to / length_from; the directed Thurston
/// distance is log(value). No sound subtree bound is available here, so the
/// search enumerates to max_depth and reports the result as uncertified.
inline SupRatioResult thurston_distance(const MarkovPoint& from, const MarkovPoint& to, double tol = 1e-6,
                                        SearchLimits lim = {})
{
    SupQuery q;
    q.objective = [from, to](const Slope& s) {
        const auto lt = detail::log_trace_pair(s, from, to);
        return detail::length_from_log_trace(lt[1]) / detail::length_from_log_trace(lt[0]);
    };
    q.tolerance = tol;
    q.max_depth = lim.max_depth;
    q.max_evals = lim.max_evals;
    return maximize(q);
}

/// Sup over slopes of d length(v) / length; weights cancel.
inline SupRatioResult thurston_norm(const MarkovPoint& m, const PTTangent& v, double tol = 1e-6,
                                    SearchLimits lim = {})
{
    if (std::abs(tangency_residual(m, v)) >
        kMarkovTolerance * (1.0 + m.x * m.y) * (std::abs(v.wx) + std::abs(v.wy) + std::abs(v.wz))) {
        throw std::invalid_argument("thurston_norm: vector is not tangent to the Markov cubic");
    }
    SupQuery q;
    q.objective = [m, v](const Slope& s) {
        const auto d = slope_length_along(m, s, v);
        return d.derivative / d.length;
    };
    q.tolerance = tol;
    q.max_depth = lim.max_depth;
    q.max_evals = lim.max_evals;
    return maximize(q);
}

/// Image of s under the positive Dehn twist about w: s + (w ^ s) w,
/// with w ^ s = p_w q_s - q_w p_s.
inline Slope twist_slope(const Slope& w, const Slope& s, std::int64_t k = 1)
{
    const std::int64_t c = teich::detail::checked_mul(k, teich::detail::cross(w.p, w.q, s.p, s.q));
    return Slope{teich::detail::checked_add(s.p, teich::detail::checked_mul(c, w.p)),
                 teich::detail::checked_add(s.q, teich::detail::checked_mul(c, w.q))}
        .canonical();
}

/// Mapping-class action of k Dehn twists about a base slope. The new point
/// satisfies t_s(twisted) = t_{T(s)}(m).
inline MarkovPoint dehn_twist(const MarkovPoint& m, const Slope& about, std::int64_t k)
{
    double x = m.x, y = m.y, z = m.z;
    const Slope w = about.canonical();
    enum { twist10, twist01, twist11 } kind;
    if (w == Slope{1, 0}) {
        kind = twist10;
    } else if (w == Slope{0, 1}) {
        kind = twist01;
    } else if (w == Slope{1, 1}) {
        kind = twist11;
    } else {
        throw std::invalid_argument("dehn_twist: twisting curve must be 1/0, 0/1 or 1/1");
    }
    const std::int64_t n = k < 0 ? -k : k;
    for (std::int64_t i = 0; i < n; ++i) {
        double nx = x, ny = y, nz = z;
        switch (kind) {
        case twist10:
            if (k > 0) { ny = z; nz = x * z - y; } else { ny = x * y - z; nz = y; }
            break;
        case twist01:
            if (k > 0) { nx = x * y - z; nz = x; } else { nx = z; nz = y * z - x; }
            break;
        case twist11:
            if (k > 0) { nx = y; ny = y * z - x; } else { nx = x * z - y; ny = x; }
            break;
        }
        x = nx;
        y = ny;
        z = nz;
        if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
            throw std::overflow_error("dehn_twist: traces overflowed after " + std::to_string(i + 1) +
                                      " twists");
        }
    }
    return MarkovPoint::make(x, y, z);
}

/// length(l, m) / L where L = exp(d_L(base, m)) is the Lipschitz constant of
/// the optimal map from base to m.
inline double normalized_length_functional(const MarkovPoint& base, const MarkovPoint& m,
                                           const WeightedLamination& l, double tol = 1e-6,
                                           SearchLimits lim = {12, 50'000'000})
{
    const double lip = thurston_distance(base, m, tol, lim).value;
    return length(m, l) / lip;
}

} // namespace teich::ptorus
