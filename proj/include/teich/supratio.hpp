#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "teich/farey.hpp"

namespace teich {

/// Maximization of a real functional over all rational slopes.
///
/// subtree_bound, when set, must bound the objective from above on every
/// slope strictly inside a node's interval. If it is marked sound the search
/// prunes with it and can certify the result. Without a sound bound the search
/// runs breadth-first to max_depth and never certifies.
struct SupQuery {
    std::function<double(const Slope&)> objective;
    std::function<double(const FareyNode&)> subtree_bound;
    bool bound_is_sound = false;
    double tolerance = 1e-6;
    int max_depth = 16;
    std::int64_t max_evals = 10'000'000;
};

struct SupRatioResult {
    double value = 0.0;
    Slope argmax{0, 1};
    bool certified = false;
    /// Upper bound on the supremum when the bound is sound, +inf otherwise.
    double frontier_bound = std::numeric_limits<double>::infinity();
    std::int64_t evals = 0;
    /// Last depth at which the running maximum rose by more than tolerance.
    int stabilization_depth = 0;
};

namespace detail {

struct FrontierEntry {
    double bound;
    FareyNode node;
    Slope mid;
};

// Max-heap on bound; ties go to shallower nodes, then to the lexicographically
// smaller mediant.
struct FrontierOrder {
    bool operator()(const FrontierEntry& a, const FrontierEntry& b) const
    {
        if (a.bound != b.bound) {
            return a.bound < b.bound;
        }
        if (a.node.depth != b.node.depth) {
            return a.node.depth > b.node.depth;
        }
        return std::tie(a.mid.p, a.mid.q) > std::tie(b.mid.p, b.mid.q);
    }
};

inline double checked_objective(const SupQuery& q, const Slope& s)
{
    const double v = q.objective(s);
    if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "objective is not finite at slope " << s.str() << " (value " << v << ")";
        throw std::domain_error(msg.str());
    }
    return v;
}

} // namespace detail

/// Best-first branch and bound over the Stern-Brocot tree.
inline SupRatioResult maximize(const SupQuery& q)
{
    if (!q.objective) {
        throw std::invalid_argument("maximize: objective is not set");
    }
    if (!(q.tolerance > 0.0)) {
        throw std::invalid_argument("maximize: tolerance must be positive");
    }
    if (q.max_depth < 0) {
        throw std::invalid_argument("maximize: max_depth must be >= 0");
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    const bool prune = q.bound_is_sound && static_cast<bool>(q.subtree_bound);

    SupRatioResult res;
    res.value = -inf;

    auto consider = [&](const Slope& s, int depth) {
        const double v = detail::checked_objective(q, s);
        ++res.evals;
        if (v > res.value) {
            if (res.evals == 1 || v > res.value + q.tolerance) {
                res.stabilization_depth = depth;
            }
            res.value = v;
            res.argmax = s;
        }
    };

    auto bound_of = [&](const FareyNode& n) {
        if (!q.subtree_bound) {
            return inf;
        }
        const double b = q.subtree_bound(n);
        return std::isnan(b) ? inf : b;
    };

    for (const auto& s : root_slopes()) {
        consider(s, 0);
    }

    if (!q.subtree_bound) {
        // Every bound is +inf, so the best-first order reduces to depth, then mediant.
        std::vector<detail::FrontierEntry> level;
        for (const auto& n : root_nodes()) {
            level.push_back({inf, n, n.mid()});
        }
        bool open_left = false;
        for (int d = 1; d <= q.max_depth && !level.empty() && !open_left; ++d) {
            std::sort(level.begin(), level.end(), [](const auto& a, const auto& b) {
                return std::tie(a.mid.p, a.mid.q) < std::tie(b.mid.p, b.mid.q);
            });
            std::vector<detail::FrontierEntry> next;
            if (d < q.max_depth) {
                next.reserve(2 * level.size());
            }
            for (const auto& e : level) {
                if (res.evals >= q.max_evals) {
                    open_left = true;
                    break;
                }
                consider(e.mid, d);
                if (d < q.max_depth) {
                    const FareyNode l = e.node.left_child();
                    const FareyNode r = e.node.right_child();
                    next.push_back({inf, l, l.mid()});
                    next.push_back({inf, r, r.mid()});
                }
            }
            level = std::move(next);
        }
        res.certified = false;
        res.frontier_bound = inf;
        return res;
    }

    std::priority_queue<detail::FrontierEntry, std::vector<detail::FrontierEntry>,
                        detail::FrontierOrder>
        frontier;
    double discarded = -inf; // bounds of cells dropped because they could not improve
    double truncated = -inf; // bounds of cells cut off by max_depth

    auto offer = [&](const FareyNode& n) {
        const double b = bound_of(n);
        if (prune && b <= res.value + q.tolerance) {
            discarded = std::max(discarded, b);
            return;
        }
        frontier.push({b, n, n.mid()});
    };

    if (q.max_depth >= 1) {
        for (const auto& n : root_nodes()) {
            offer(n);
        }
    } else {
        for (const auto& n : root_nodes()) {
            truncated = std::max(truncated, bound_of(n));
        }
    }

    while (!frontier.empty()) {
        if (res.evals >= q.max_evals) {
            break;
        }
        const detail::FrontierEntry top = frontier.top();
        if (prune && top.bound <= res.value + q.tolerance) {
            // Everything left is bounded by this entry.
            discarded = std::max(discarded, top.bound);
            while (!frontier.empty()) {
                frontier.pop();
            }
            break;
        }
        frontier.pop();
        consider(top.mid, top.node.depth);
        if (top.node.depth < q.max_depth) {
            offer(top.node.left_child());
            offer(top.node.right_child());
        } else {
            truncated = std::max(truncated, bound_of(top.node.left_child()));
            truncated = std::max(truncated, bound_of(top.node.right_child()));
        }
    }

    double open = truncated;
    while (!frontier.empty()) {
        open = std::max(open, frontier.top().bound);
        frontier.pop();
    }

    res.frontier_bound = std::max({res.value, open, discarded});
    res.certified = prune && open <= res.value + q.tolerance;
    if (!prune) {
        res.frontier_bound = open > -inf ? inf : res.value;
        res.certified = false;
    }
    return res;
}

} // namespace teich
