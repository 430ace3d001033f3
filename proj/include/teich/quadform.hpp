#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "teich/farey.hpp"

namespace teich {

/// Symmetric 2x2 matrix [[a, b], [b, c]] acting as the quadratic form
/// a p^2 + 2 b p q + c q^2 on real slope vectors (p, q).
struct Sym2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double p, double q) const { return a * p * p + 2.0 * b * p * q + c * q * q; }
    double operator()(const Slope& s) const
    {
        return (*this)(static_cast<double>(s.p), static_cast<double>(s.q));
    }
    double det() const { return a * c - b * b; }

    friend Sym2 operator+(const Sym2& x, const Sym2& y) { return {x.a + y.a, x.b + y.b, x.c + y.c}; }
    friend Sym2 operator*(double s, const Sym2& x) { return {s * x.a, s * x.b, s * x.c}; }
};

/// Extreme values of num(v)/den(v) over nonzero real v, with den positive
/// definite, and a unit direction attaining the maximum.
struct RayleighExtremes {
    double max = 0.0;
    double min = 0.0;
    std::array<double, 2> argmax{1.0, 0.0};
};

inline RayleighExtremes generalized_eigen(const Sym2& num, const Sym2& den)
{
    const double dd = den.det();
    if (!(den.a > 0.0) || !(dd > 0.0)) {
        throw std::invalid_argument("generalized_eigen: denominator form is not positive definite");
    }
    // det(num - t den) = dd t^2 - m t + num.det()
    const double m = num.a * den.c + num.c * den.a - 2.0 * num.b * den.b;
    const double disc = std::max(0.0, m * m - 4.0 * dd * num.det());
    const double root = std::sqrt(disc);
    RayleighExtremes r;
    // Avoid cancellation: compute the larger-magnitude root first.
    if (m >= 0.0) {
        r.max = (m + root) / (2.0 * dd);
        r.min = r.max != 0.0 ? num.det() / (dd * r.max) : (m - root) / (2.0 * dd);
    } else {
        r.min = (m - root) / (2.0 * dd);
        r.max = r.min != 0.0 ? num.det() / (dd * r.min) : (m + root) / (2.0 * dd);
    }
    // Null vector of (num - max den); take the better conditioned row.
    const Sym2 k{num.a - r.max * den.a, num.b - r.max * den.b, num.c - r.max * den.c};
    std::array<double, 2> v1{-k.b, k.a};
    std::array<double, 2> v2{-k.c, k.b};
    const double n1 = std::hypot(v1[0], v1[1]);
    const double n2 = std::hypot(v2[0], v2[1]);
    if (n1 == 0.0 && n2 == 0.0) {
        // num is a multiple of den: every direction is extremal.
        r.argmax = {1.0, 0.0};
    } else if (n1 >= n2) {
        r.argmax = {v1[0] / n1, v1[1] / n1};
    } else {
        r.argmax = {v2[0] / n2, v2[1] / n2};
    }
    return r;
}

/// Upper bound of num/den over directions strictly inside the cone spanned by
/// the node's endpoint vectors. The quotient has exactly two critical
/// directions (its max and min eigen-directions), so on an arc that misses the
/// max direction it is largest at an endpoint.
inline double cone_ratio_bound(const Sym2& num, const Sym2& den, const FareyNode& node)
{
    const RayleighExtremes ex = generalized_eigen(num, den);
    const double lp = static_cast<double>(node.left.p);
    const double lq = static_cast<double>(node.left.q);
    const double rp = static_cast<double>(node.right.p);
    const double rq = static_cast<double>(node.right.q);
    const double e0 = ex.argmax[0];
    const double e1 = ex.argmax[1];
    // e = alpha L + beta R; inside iff alpha, beta share a strict sign.
    const double lr = lp * rq - lq * rp;
    const double alpha = (e0 * rq - e1 * rp) / lr;
    const double beta = (lp * e1 - lq * e0) / lr;
    if ((alpha > 0.0 && beta > 0.0) || (alpha < 0.0 && beta < 0.0)) {
        return ex.max;
    }
    const double at_left = num(lp, lq) / den(lp, lq);
    const double at_right = num(rp, rq) / den(rp, rq);
    const double m = std::max(at_left, at_right);
    // Slack for the rounding in the eigenvector test near an endpoint.
    return m + 1e-12 * std::max(1.0, std::abs(m));
}

} // namespace teich
