#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "teich/ptorus.hpp"

using namespace teich::ptorus;
using teich::Slope;
using teich::testing::MatrixRep;
using teich::testing::rel_err;
using teich::testing::uniform;

namespace {

const MarkovPoint kBase{3.0, 3.0, 3.0};

PTTangent random_chart_tangent(const MarkovPoint& m)
{
    return lift_tangent(m, uniform(-1, 1), uniform(-1, 1));
}

} // namespace

TEST(PTorusMarkov, ChartExamples)
{
    const auto m = from_parameters(3.0, 3.0);
    EXPECT_DOUBLE_EQ(m.z, 6.0);
    EXPECT_EQ(from_parameters(3.0, 3.0, Branch::lower), kBase);
    const auto p = from_parameters(4.0, 4.0);
    EXPECT_LT(p.residual(), 1e-12);
    EXPECT_GT(p.z, 2.0);
    EXPECT_THROW(from_parameters(2.5, 2.5), std::domain_error);
    EXPECT_THROW(from_parameters(1.0, 5.0), std::domain_error);
    EXPECT_THROW(MarkovPoint::make(3.0, 3.0, 3.1), std::domain_error);
    EXPECT_THROW(MarkovPoint::make(2.0, 2.0, 2.0), std::domain_error);
    EXPECT_EQ(branch_of(m), Branch::upper);
    EXPECT_EQ(branch_of(from_parameters(4.0, 5.0, Branch::lower)), Branch::lower);
}

TEST(PTorusMarkov, LiftedTangentsAreTangent)
{
    for (int i = 0; i < 100; ++i) {
        const auto m = teich::testing::random_markov_point();
        const auto v = random_chart_tangent(m);
        const auto n = markov_normal(m);
        const double scale = std::abs(n[0] * v.wx) + std::abs(n[1] * v.wy) + std::abs(n[2] * v.wz);
        EXPECT_LE(std::abs(tangency_residual(m, v)), 1e-12 * scale);
    }
}

TEST(PTorusTrace, Examples)
{
    const auto t10 = trace_of_slope(kBase, {1, 0});
    EXPECT_DOUBLE_EQ(t10.t(), 3.0);
    const auto g = t10.grad();
    EXPECT_DOUBLE_EQ(g[0], 1.0);
    EXPECT_DOUBLE_EQ(g[1], 0.0);
    EXPECT_DOUBLE_EQ(g[2], 0.0);
    EXPECT_NEAR(trace_of_slope(kBase, {2, 1}).t(), 6.0, 1e-12);
    EXPECT_NEAR(trace_of_slope(kBase, {-1, 1}).t(), 6.0, 1e-12);
    EXPECT_NEAR(trace_of_slope(kBase, {1, 2}).t(), 6.0, 1e-12);
}

TEST(PTorusTrace, MatchesMatrixWordOracle)
{
    for (int i = 0; i < 20; ++i) {
        const auto m = teich::testing::random_markov_point(3.0, 4.0);
        const MatrixRep rep(m);
        EXPECT_NEAR(static_cast<double>(rep.trace({1, 1})), m.z, 1e-12 * m.z);
        for (const auto& s : teich::enumerate(6)) {
            const double want = static_cast<double>(rep.trace(s));
            EXPECT_LE(rel_err(trace_of_slope(m, s).t(), want), 1e-9) << s.str();
            EXPECT_LE(rel_err(slope_length(m, s), static_cast<double>(rep.length(s))), 1e-9) << s.str();
        }
    }
}

TEST(PTorusTrace, VertexRelationToDepth10)
{
    // Around every Farey triangle (a, b, mediant) with far vertex c:
    // t_a t_b = t_mediant + t_c.
    const auto m = from_parameters(3.3, 3.7);
    struct Edge {
        teich::FareyNode node;
        Slope opposite;
    };
    std::vector<Edge> level{{{{0, 1}, {1, 1}, 1}, {1, 0}}, {{{1, 1}, {1, 0}, 1}, {0, 1}}, {{{-1, 0}, {0, 1}, 1}, {1, 1}}};
    for (int d = 1; d <= 10; ++d) {
        std::vector<Edge> next;
        for (const auto& e : level) {
            const double ta = trace_of_slope(m, e.node.left).t();
            const double tb = trace_of_slope(m, e.node.right).t();
            const double tm = trace_of_slope(m, e.node.mid()).t();
            const double tc = trace_of_slope(m, e.opposite).t();
            EXPECT_LE(rel_err(tm + tc, ta * tb), 1e-12);
            next.push_back({e.node.left_child(), e.node.right});
            next.push_back({e.node.right_child(), e.node.left});
        }
        level = std::move(next);
    }
}

TEST(PTorusTrace, DeepSlopesStayFiniteThroughLogSpace)
{
    // Fibonacci slopes: traces grow doubly exponentially.
    Slope a{0, 1}, b{1, 1};
    for (int i = 0; i < 60; ++i) {
        const Slope c{a.p + b.p, a.q + b.q};
        a = b;
        b = c;
    }
    const auto j = trace_of_slope(kBase, b);
    EXPECT_TRUE(std::isfinite(j.log_t));
    EXPECT_GT(j.log_t, 400.0);
    const double len = slope_length(kBase, b);
    EXPECT_NEAR(len, 2.0 * j.log_t, 1e-9 * len);
}

TEST(PTorusLength, Examples)
{
    EXPECT_NEAR(length(kBase, {1.0, {1, 0}}), 2.0 * std::acosh(1.5), 1e-15);
    EXPECT_NEAR(2.0 * std::acosh(1.5), 1.9248473, 1e-7);
    EXPECT_DOUBLE_EQ(length(kBase, {2.0, {1, 0}}), 2.0 * length(kBase, {1.0, {1, 0}}));
}

TEST(PTorusLength, DifferentialMatchesChartFiniteDifferences)
{
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        const auto m = teich::testing::random_markov_point();
        const auto slopes = teich::enumerate(4);
        const auto s = slopes[static_cast<std::size_t>(uniform(0, static_cast<double>(slopes.size()) - 1e-9))];
        const WeightedLamination l{uniform(0.5, 2.0), s};
        const double dx = uniform(-1, 1), dy = uniform(-1, 1);
        const auto v = lift_tangent(m, dx, dy);
        const auto dl = d_length(m, l);
        const double analytic = dl[0] * v.wx + dl[1] * v.wy + dl[2] * v.wz;
        const double fd = teich::testing::central_difference(
            [&](double t) { return length(chart_point(m, m.x + t * dx, m.y + t * dy), l); }, 0.0, h);
        EXPECT_LE(std::abs(analytic - fd), 1e-6 * std::max(1.0, std::abs(fd))) << i << " " << s.str();
        const auto along = slope_length_along(m, s, v);
        EXPECT_LE(std::abs(l.weight * along.derivative - analytic), 1e-12 * std::max(1.0, std::abs(analytic)));
    }
}

TEST(PTorusDistance, IdenticalPointsGiveRatioOne)
{
    const auto r = thurston_distance(kBase, kBase);
    EXPECT_DOUBLE_EQ(r.value, 1.0);
    EXPECT_FALSE(r.certified);
}

TEST(PTorusDistance, BaseToChartPointMatchesBruteForce)
{
    const auto to = from_parameters(3.0, 3.0); // (3, 3, 6)
    const double lower = slope_length(to, {1, 1}) / slope_length(kBase, {1, 1});
    const auto r = thurston_distance(kBase, to);
    EXPECT_GE(r.value, lower);
    EXPECT_GT(std::log(r.value), 0.0);

    const MatrixRep from_rep(kBase);
    const MatrixRep to_rep(to);
    double brute = 0.0;
    for (const auto& s : teich::enumerate(14)) {
        brute = std::max(brute, static_cast<double>(to_rep.length(s) / from_rep.length(s)));
    }
    EXPECT_LE(rel_err(r.value, brute), 1e-9);
}

TEST(PTorusDistance, AsymmetricInGeneral)
{
    const auto a = from_parameters(3.0, 3.0, Branch::lower);
    const auto b = from_parameters(5.0, 3.5);
    const double ab = std::log(thurston_distance(a, b).value);
    const double ba = std::log(thurston_distance(b, a).value);
    EXPECT_GT(std::abs(ab - ba), 0.01);
    EXPECT_GT(ab, 0.0);
    EXPECT_GT(ba, 0.0);
}

TEST(PTorusDistance, TriangleInequalityOnSamples)
{
    for (int i = 0; i < 10; ++i) {
        const auto a = teich::testing::random_markov_point();
        const auto b = teich::testing::random_markov_point();
        const auto c = teich::testing::random_markov_point();
        const SearchLimits lim{10};
        const double ab = std::log(thurston_distance(a, b, 1e-6, lim).value);
        const double bc = std::log(thurston_distance(b, c, 1e-6, lim).value);
        const double ac = std::log(thurston_distance(a, c, 1e-6, lim).value);
        EXPECT_LE(ac, ab + bc + 1e-9);
    }
}

TEST(PTorusNorm, ZeroVectorAndHomogeneity)
{
    const auto m = from_parameters(3.5, 4.0);
    EXPECT_DOUBLE_EQ(thurston_norm(m, {0, 0, 0}).value, 0.0);
    const auto v = lift_tangent(m, 0.3, -0.7);
    const double n1 = thurston_norm(m, v, 1e-6, {10}).value;
    const double n3 = thurston_norm(m, 3.0 * v, 1e-6, {10}).value;
    EXPECT_NEAR(n3, 3.0 * n1, 1e-12 * n3);
    EXPECT_GT(n1, 0.0);
    EXPECT_GT(thurston_norm(m, -v, 1e-6, {10}).value, 0.0);
    EXPECT_THROW(thurston_norm(m, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(PTorusNorm, ApproximatesDistanceQuotient)
{
    const auto m = from_parameters(3.5, 4.0);
    const double dx = 0.4, dy = -0.2;
    const auto v = lift_tangent(m, dx, dy);
    const double norm = thurston_norm(m, v, 1e-9, {12}).value;
    const double t = 1e-5;
    const double d = std::log(thurston_distance(m, chart_point(m, m.x + t * dx, m.y + t * dy), 1e-9, {12}).value) / t;
    EXPECT_NEAR(d, norm, 1e-3 * norm);
}

TEST(PTorusTwist, SlopeActionExamples)
{
    EXPECT_EQ(twist_slope({1, 0}, {0, 1}), (Slope{1, 1}));
    EXPECT_EQ(twist_slope({1, 0}, {0, 1}, 3), (Slope{3, 1}));
    EXPECT_EQ(twist_slope({1, 0}, {0, 1}, -1), (Slope{-1, 1}));
    EXPECT_EQ(twist_slope({1, 0}, {1, 0}, 7), (Slope{1, 0}));
    const Slope s{2, 5};
    EXPECT_EQ(twist_slope({1, 1}, twist_slope({1, 1}, s, 4), -4), s);
}

TEST(PTorusTwist, PointActionMatchesSlopeAction)
{
    for (const Slope w : {Slope{1, 0}, Slope{0, 1}, Slope{1, 1}}) {
        for (std::int64_t k : {-3, -1, 1, 2, 5}) {
            const auto m = from_parameters(3.2, 4.1, Branch::lower);
            const auto tm = dehn_twist(m, w, k);
            EXPECT_LT(tm.residual(), 1e-9);
            for (const auto& s : teich::enumerate(4)) {
                const Slope ts = twist_slope(w, s, k);
                EXPECT_LE(rel_err(trace_of_slope(tm, s).t(), trace_of_slope(m, ts).t()), 1e-9)
                    << w.str() << " k=" << k << " s=" << s.str();
            }
            EXPECT_LE(rel_err(slope_length(tm, w), slope_length(m, w)), 1e-12);
        }
    }
    EXPECT_EQ(dehn_twist(kBase, {1, 0}, 0), kBase);
    EXPECT_THROW(dehn_twist(kBase, {2, 1}, 1), std::invalid_argument);
}

TEST(PTorusTwist, LengthGrowsLinearlyInTwists)
{
    const Slope s{0, 1};
    double prev = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double len = slope_length(dehn_twist(kBase, {1, 0}, k), s);
        EXPECT_GT(len, prev);
        prev = len;
    }
    // slope grows like k * i(w, s) * length(w)
    const double l40 = slope_length(dehn_twist(kBase, {1, 0}, 40), s);
    const double l20 = slope_length(dehn_twist(kBase, {1, 0}, 20), s);
    EXPECT_NEAR((l40 - l20) / 20.0, slope_length(kBase, {1, 0}), 1e-6);
}

TEST(PTorusNormalizedFunctional, Basics)
{
    const WeightedLamination l{1.0, {2, 1}};
    EXPECT_DOUBLE_EQ(normalized_length_functional(kBase, kBase, l), length(kBase, l));
    const auto m = dehn_twist(kBase, {1, 0}, 3);
    const double f1 = normalized_length_functional(kBase, m, l, 1e-6, {8});
    const double f2 = normalized_length_functional(kBase, m, {2.0, {2, 1}}, 1e-6, {8});
    EXPECT_NEAR(f2, 2.0 * f1, 1e-12 * f2);
    EXPECT_GT(f1, 0.0);
}

TEST(PTorusTwist, SingleTwistOfBasePoint)
{
    const auto m = dehn_twist(kBase, {1, 0}, 1);
    EXPECT_EQ(m, (MarkovPoint{3.0, 3.0, 6.0}));
    EXPECT_EQ(m.residual(), 0.0);
}

TEST(PTorusDistance, DocumentedPairValue)
{
    const MarkovPoint y{3.0, 3.0, 6.0};
    const auto r = thurston_distance(kBase, y);
    const double ratio11 = std::acosh(3.0) / std::acosh(1.5);
    EXPECT_NEAR(ratio11, 1.8316, 1e-4);
    EXPECT_GE(r.value, ratio11 * (1 - 1e-15));
}

TEST(PTorusNorm, AsymmetricUnderNegation)
{
    const auto m = from_parameters(3.5, 4.0);
    const auto v = lift_tangent(m, 1.0, 0.0);
    const double plus = thurston_norm(m, v, 1e-6, {12}).value;
    const double minus = thurston_norm(m, -v, 1e-6, {12}).value;
    EXPECT_GT(std::abs(plus - minus), 1e-3 * std::max(plus, minus));
}
