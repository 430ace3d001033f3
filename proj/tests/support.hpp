#pragma once

// Test-only oracles. Nothing here calls into the code paths it is used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "teich/farey.hpp"
#include "teich/ptorus.hpp"
#include "teich/torus.hpp"

namespace teich::testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(0x5eed'7e1c'4a11ULL);
    return gen;
}

inline double uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline torus::TorusPoint random_torus_point(double xmax = 2.0, double ymin = 0.2, double ymax = 5.0)
{
    return {uniform(-xmax, xmax), uniform(ymin, ymax)};
}

inline torus::TangentVector random_tangent(double scale = 1.0)
{
    return {uniform(-scale, scale), uniform(-scale, scale)};
}

inline ptorus::MarkovPoint random_markov_point(double lo = 3.0, double hi = 6.0)
{
    const auto branch = uniform(0.0, 1.0) < 0.5 ? ptorus::Branch::upper : ptorus::Branch::lower;
    return ptorus::from_parameters(uniform(lo, hi), uniform(lo, hi), branch);
}

/// Number of transverse crossings of the closed geodesics with directions a
/// and b on R^2 / Z^2, found by solving t a - s b = c + n over integer n.
inline std::int64_t count_lattice_crossings(const Slope& a, const Slope& b)
{
    const double ap = static_cast<double>(a.p), aq = static_cast<double>(a.q);
    const double bp = static_cast<double>(b.p), bq = static_cast<double>(b.q);
    const double det = -ap * bq + aq * bp; // det [a, -b]
    if (det == 0.0) {
        return 0;
    }
    const double cx = 0.1234567, cy = 0.3456789; // generic offset of the second curve
    const std::int64_t range = std::abs(a.p) + std::abs(a.q) + std::abs(b.p) + std::abs(b.q) + 2;
    std::int64_t count = 0;
    for (std::int64_t nx = -range; nx <= range; ++nx) {
        for (std::int64_t ny = -range; ny <= range; ++ny) {
            const double rx = cx + static_cast<double>(nx);
            const double ry = cy + static_cast<double>(ny);
            // [ap -bp; aq -bq] [t; s] = [rx; ry]
            const double t = (rx * -bq - (-bp) * ry) / det;
            const double s = (ap * ry - aq * rx) / det;
            if (t >= 0.0 && t < 1.0 && s >= 0.0 && s < 1.0) {
                ++count;
            }
        }
    }
    return count;
}

using Mat2 = std::array<long double, 4>; // row major

inline Mat2 mul(const Mat2& a, const Mat2& b)
{
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 inverse(const Mat2& a) { return {a[3], -a[1], -a[2], a[0]}; }

/// Generators A, B in SL(2, R) with tr A = x, tr B = y, tr AB = z.
struct MatrixRep {
    Mat2 a;
    Mat2 b;

    explicit MatrixRep(const ptorus::MarkovPoint& m)
    {
        const long double z = m.z;
        const long double s = (-z - std::sqrt(z * z - 4.0L)) / 2.0L;
        a = {static_cast<long double>(m.x), 1.0L, -1.0L, 0.0L};
        b = {0.0L, s, -1.0L / s, static_cast<long double>(m.y)};
    }

    /// Word of a slope: the product of the words of its Farey parents,
    /// smaller slope first; (1,0) -> A, (0,1) -> B, (-1,0) -> A^-1.
    Mat2 word(const Slope& target) const
    {
        const Slope s = target.canonical();
        if (s == Slope{1, 0}) return a;
        if (s == Slope{0, 1}) return b;
        Slope L, R;
        Mat2 wl, wr;
        if (s.p < 0) {
            L = {-1, 0}; R = {0, 1}; wl = inverse(a); wr = b;
        } else {
            L = {0, 1}; R = {1, 0}; wl = b; wr = a;
        }
        for (;;) {
            const Slope m{L.p + R.p, L.q + R.q};
            const Mat2 wm = mul(wl, wr);
            if (m == s) return wm;
            if (static_cast<__int128>(s.p) * m.q < static_cast<__int128>(m.p) * s.q) {
                R = m; wr = wm;
            } else {
                L = m; wl = wm;
            }
        }
    }

    long double trace(const Slope& s) const
    {
        const Mat2 w = word(s);
        return std::abs(w[0] + w[3]);
    }

    long double length(const Slope& s) const { return 2.0L * std::acosh(trace(s) / 2.0L); }
};

/// Central difference of f at x with step h.
inline double central_difference(const std::function<double(double)>& f, double x, double h)
{
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double got, double want)
{
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

} // namespace teich::testing
