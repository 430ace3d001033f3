#pragma once

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace teich {

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("slope arithmetic overflow in addition");
    }
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("slope arithmetic overflow in multiplication");
    }
    return r;
}

// p_a*q_b - q_a*p_b, exact.
inline std::int64_t cross(std::int64_t pa, std::int64_t qa, std::int64_t pb, std::int64_t qb)
{
    const __int128 v = static_cast<__int128>(pa) * qb - static_cast<__int128>(qa) * pb;
    if (v > INT64_MAX || v < INT64_MIN) {
        throw std::overflow_error("slope arithmetic overflow in determinant");
    }
    return static_cast<std::int64_t>(v);
}

} // namespace detail

/// Isotopy class of an essential simple closed curve on the (punctured) torus,
/// written as a primitive integer vector (p, q).
///
/// Canonical form has q > 0, or (p, q) = (1, 0) for the slope at infinity.
/// Farey-tree nodes on the negative side keep the raw representative (-1, 0)
/// for their left endpoint so that mediants are plain vector sums; call
/// canonical() before comparing or reporting such a value.
struct Slope {
    std::int64_t p = 1;
    std::int64_t q = 0;

    /// Builds a canonical slope from any nonzero primitive pair.
    static Slope make(std::int64_t p, std::int64_t q)
    {
        if (p == 0 && q == 0) {
            throw std::invalid_argument("slope (0,0) is not a curve");
        }
        if (std::gcd(p, q) != 1) {
            throw std::invalid_argument("slope " + std::to_string(p) + "/" + std::to_string(q) +
                                        " is not primitive");
        }
        return Slope{p, q}.canonical();
    }

    Slope canonical() const
    {
        if (q < 0 || (q == 0 && p < 0)) {
            return Slope{-p, -q};
        }
        return *this;
    }

    bool is_canonical() const
    {
        if (q == 0) {
            return p == 1;
        }
        return q > 0 && std::gcd(p, q) == 1;
    }

    std::string str() const
    {
        const Slope c = canonical();
        return std::to_string(c.p) + "/" + std::to_string(c.q);
    }

    friend bool operator==(const Slope&, const Slope&) = default;
    friend auto operator<=>(const Slope&, const Slope&) = default;
};

/// Parses "p/q" (with "1/0" for infinity) into a canonical slope.
inline Slope parse_slope(const std::string& text)
{
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        throw std::invalid_argument("slope must be written p/q: '" + text + "'");
    }
    std::size_t used_p = 0;
    std::size_t used_q = 0;
    std::int64_t p = 0;
    std::int64_t q = 0;
    try {
        p = std::stoll(text.substr(0, slash), &used_p);
        q = std::stoll(text.substr(slash + 1), &used_q);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed slope '" + text + "'");
    }
    if (used_p != slash || used_q != text.size() - slash - 1) {
        throw std::invalid_argument("malformed slope '" + text + "'");
    }
    return Slope::make(p, q);
}

/// Determinant p_a q_b - q_a p_b of the raw representatives.
inline std::int64_t determinant(const Slope& a, const Slope& b)
{
    return detail::cross(a.p, a.q, b.p, b.q);
}

inline bool are_neighbors(const Slope& a, const Slope& b)
{
    const auto d = determinant(a, b);
    return d == 1 || d == -1;
}

/// Mediant of two Farey neighbours, i.e. the vector sum of the representatives.
/// mediant((1,0), (0,1)) = (1,1); the negative side uses (-1,0) as left end.
inline Slope mediant(const Slope& a, const Slope& b)
{
    if (!are_neighbors(a, b)) {
        throw std::invalid_argument("mediant of non-neighbours " + a.str() + " and " + b.str());
    }
    return Slope{detail::checked_add(a.p, b.p), detail::checked_add(a.q, b.q)}.canonical();
}

/// Geometric intersection number on the torus: |p_a q_b - q_a p_b|.
inline std::int64_t intersection_number(const Slope& a, const Slope& b)
{
    const auto d = determinant(a.canonical(), b.canonical());
    return d < 0 ? -d : d;
}

/// Cell of the Stern-Brocot search tree: the open interval of slopes strictly
/// between two Farey neighbours. depth is the depth of the cell's mediant.
struct FareyNode {
    Slope left;
    Slope right;
    int depth = 1;

    Slope mid() const { return mediant(left, right); }
    FareyNode left_child() const { return {left, mid(), depth + 1}; }
    FareyNode right_child() const { return {mid(), right, depth + 1}; }
};

/// The three depth-0 slopes (0,1), (1,0), (1,1) forming the root Farey triangle.
inline std::vector<Slope> root_slopes()
{
    return {Slope{0, 1}, Slope{1, 0}, Slope{1, 1}};
}

/// The three edges of the root triangle; their mediants are the depth-1 slopes
/// (1,2), (2,1) and (-1,1). Every other slope lies strictly inside exactly one.
inline std::vector<FareyNode> root_nodes()
{
    return {FareyNode{Slope{0, 1}, Slope{1, 1}, 1}, FareyNode{Slope{1, 1}, Slope{1, 0}, 1},
            FareyNode{Slope{-1, 0}, Slope{0, 1}, 1}};
}

/// All slopes of depth <= max_depth, roots first, then breadth-first left to right.
inline std::vector<Slope> enumerate(int max_depth)
{
    if (max_depth < 0) {
        throw std::invalid_argument("enumerate: max_depth must be >= 0");
    }
    std::vector<Slope> out = root_slopes();
    std::vector<FareyNode> level = root_nodes();
    for (int d = 1; d <= max_depth; ++d) {
        std::vector<FareyNode> next;
        next.reserve(level.size() * 2);
        for (const auto& n : level) {
            out.push_back(n.mid());
            if (d < max_depth) {
                next.push_back(n.left_child());
                next.push_back(n.right_child());
            }
        }
        level = std::move(next);
    }
    return out;
}

/// Depth of a canonical slope in the tree used by enumerate().
inline int depth_of(const Slope& s)
{
    const Slope c = s.canonical();
    for (const auto& r : root_slopes()) {
        if (r == c) {
            return 0;
        }
    }
    FareyNode node = c.p < 0 ? root_nodes()[2] : (c.p < c.q ? root_nodes()[0] : root_nodes()[1]);
    for (;;) {
        const Slope m = node.mid();
        if (m == c) {
            return node.depth;
        }
        // Compare c with m as fractions; both have positive q.
        if (detail::cross(c.p, c.q, m.p, m.q) < 0) {
            node = node.left_child();
        } else {
            node = node.right_child();
        }
    }
}

} // namespace teich
