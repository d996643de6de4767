#include <stablegraph/marchal.hpp>
#include <stablegraph/stats.hpp>
#include <stablegraph/weights.hpp>

#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <map>
#include <set>

using namespace stablegraph;

namespace {

const Alpha a54 = Alpha::ratio(5, 4);

ExactDistribution kernels(int s) { return exact_distribution(s, 0, WeightSeq{a54}); }

Multigraph sample_row(const ExactDistribution& d, RandomStream& rng) {
    double u = rng.uniform();
    for (std::size_t i = 0; i < d.size(); ++i)
        if ((u -= d.probs[i]) < 0) return d.rows[i].graph;
    return d.rows.back().graph;
}

}  // namespace

TEST(Marchal, SingleEdgeBecomesStar) {
    const auto t = marchal_transitions(shapes::single_edge(), Alpha::ratio(3, 2));
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].prob, 1);
    EXPECT_EQ(t[0].code, canonical_code(shapes::star3()));
    RandomStream rng(1);
    for (int i = 0; i < 100; ++i) {
        auto st = MarchalState::from(shapes::single_edge(), Alpha::ratio(3, 2));
        marchal_step_inplace(st, rng);
        EXPECT_EQ(canonical_code(st.graph.to_multigraph()), canonical_code(shapes::star3()));
    }
}

TEST(Marchal, FigureEightTransitions) {
    const auto t = marchal_transitions(shapes::figure_eight(), a54);
    std::multiset<Rational> probs;
    for (const auto& x : t) probs.insert(x.prob);
    EXPECT_EQ(probs, (std::multiset<Rational>{make_rational(11, 14), make_rational(1, 14), make_rational(1, 7)}));
    RandomStream rng(2);
    std::map<CanonicalCode, long> count;
    const long N = 200000;
    for (long i = 0; i < N; ++i) {
        auto st = MarchalState::from(shapes::figure_eight(), a54);
        marchal_step_inplace(st, rng);
        ++count[canonical_code(st.graph.to_multigraph())];
    }
    for (const auto& x : t) EXPECT_NEAR(count[x.code] / double(N), to_double(x.prob), 0.005);
}

TEST(Marchal, TransitionsPushExactLawForward) {
    for (auto al : {Alpha::ratio(3, 2), Alpha::ratio(7, 4), a54})
        for (auto [s, n] : std::vector<std::pair<int, int>>{{2, 0}, {0, 2}, {1, 1}, {2, 1}, {3, 0}}) {
            const auto d0 = exact_distribution(s, n, WeightSeq{al});
            const auto d1 = exact_distribution(s, n + 1, WeightSeq{al});
            std::map<CanonicalCode, Rational> acc;
            for (std::size_t i = 0; i < d0.size(); ++i)
                for (const auto& t : marchal_transitions(d0.rows[i].graph, al)) acc[t.code] += d0.exact[i] * t.prob;
            ASSERT_EQ(acc.size(), d1.size());
            for (std::size_t i = 0; i < d1.size(); ++i) EXPECT_EQ(acc[d1.rows[i].code], d1.exact[i]);
        }
}

TEST(Marchal, SampledStepsMatchEnumeration) {
    const auto k = kernels(2);
    const auto d1 = exact_distribution(2, 1, WeightSeq{a54});
    const auto d2 = exact_distribution(2, 2, WeightSeq{a54});
    RandomStream rng(3);
    FreqTable f1, f2;
    for (int i = 0; i < 300000; ++i) {
        auto st = MarchalState::from(sample_row(k, rng), a54);
        marchal_step_inplace(st, rng);
        f1.add(st.graph.to_multigraph());
        marchal_step_inplace(st, rng);
        f2.add(st.graph.to_multigraph());
    }
    EXPECT_LT(tv_distance(f1, d1), 0.01);
    // two steps: chi-square against the exact law on M_{2,2}
    const double df = static_cast<double>(d2.size() - 1);
    EXPECT_LT(chi_square(f2, d2), df + 5 * std::sqrt(2 * df));
}

TEST(Marchal, PlantedEdgeSplits) {
    RandomStream rng(4);
    std::map<std::vector<int>, int> count;
    for (int i = 0; i < 20000; ++i) {
        auto t = planted_edge();
        marchal_tree_step_inplace(t, Alpha::ratio(3, 2), rng);
        ++count[t.compact().code()];
    }
    ASSERT_EQ(count.size(), 2u);
    for (const auto& [c, k] : count) EXPECT_NEAR(k / 20000.0, 0.5, 0.015);
}

TEST(Marchal, OrderedTreeLaw) {
    const auto al = Alpha::ratio(3, 2);
    const auto law = ordered_tree_distribution(3, al);
    RandomStream rng(5);
    std::map<std::vector<int>, long> count;
    const long N = 200000;
    for (long r = 0; r < N; ++r) {
        auto t = planted_edge();
        marchal_tree_step_inplace(t, al, rng);
        marchal_tree_step_inplace(t, al, rng);
        ++count[t.compact().code()];
    }
    double tv = 0;
    for (const auto& [c, p] : law) tv += std::abs(to_double(p) - count[c] / double(N));
    EXPECT_EQ(count.size(), law.size());
    EXPECT_LT(tv / 2, 0.01);
}

TEST(Marchal, WeightIdentityAndSurplus) {
    RandomStream rng(6);
    for (int r = 0; r < 2000; ++r) {
        auto st = MarchalState::from(r % 2 ? shapes::single_edge() : shapes::figure_eight(), a54);
        const int s = st.s;
        for (int t = 0; t < 30; ++t) {
            marchal_step_inplace(st, rng);
            ASSERT_EQ(st.total_weight(), st.predicted_total_weight());
            ASSERT_EQ(st.graph.to_multigraph().surplus(), s);
        }
        if (s == 0) EXPECT_EQ(st.total_weight(), a54.rational() * st.n - 1);
    }
}

TEST(Marchal, GrowAndReplay) {
    const auto start = MarchalState::from(shapes::theta(), a54);
    RandomStream r0(9);
    EXPECT_EQ(grow(start, 0, r0).size(), 1u);
    RandomStream r1(7, 3), r2(7, 3);
    const auto a = grow(start, 40, r1), b = grow(start, 40, r2);
    ASSERT_EQ(a.size(), 41u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].graph.to_multigraph(), b[i].graph.to_multigraph());
    EXPECT_EQ(a.back().n, 40);
}

TEST(Marchal, EraseRoot) {
    EXPECT_EQ(canonical_code(erase_root(shapes::figure_eight())), canonical_code(Multigraph(0, 1, {{0, 0, 2}})));
    const auto theta = Multigraph(0, 2, {{0, 1, 3}});
    EXPECT_EQ(canonical_code(erase_root(shapes::theta())), canonical_code(theta));
    // root on a degree-3 vertex: the vertex is contracted and its two edges merge
    EXPECT_EQ(canonical_code(erase_root(Multigraph(1, 3, {{0, 1, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 2}}))),
              canonical_code(theta));
}

TEST(Marchal, LeafMetric) {
    const auto m = rescaled_leaf_metric(shapes::single_edge(), 1, Alpha::ratio(3, 2));
    EXPECT_EQ(m, (std::vector<std::vector<double>>{{0, 1}, {1, 0}}));
    RandomStream rng(8);
    auto st = MarchalState::from(shapes::theta(), a54);
    for (int i = 0; i < 12; ++i) marchal_step_inplace(st, rng);
    const auto g = st.graph.to_multigraph();
    const auto d = rescaled_leaf_metric(g, 12, a54);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(d[i][i], 0);
        for (std::size_t j = 0; j < d.size(); ++j) {
            EXPECT_EQ(d[i][j], d[j][i]);
            for (std::size_t k = 0; k < d.size(); ++k) EXPECT_LE(d[i][k], d[i][j] + d[j][k] + 1e-12);
        }
    }
}

TEST(Marchal, RootToLeafDistanceMean) {
    // E[K_n] for the edge count on the root-leaf-1 path, from E[K_{n+1}|K_n] = K_n (1 + (a-1)/(a n - 1)).
    const auto al = Alpha::ratio(3, 2);
    const double a = 1.5;
    const int n = 2000, runs = 4000;
    using boost::math::tgamma_ratio;
    const double exact = tgamma_ratio(n + 1 - 2 / a, n - 1 / a) * tgamma_ratio(1 - 1 / a, 2 - 2 / a);
    RandomStream rng(10);
    double s = 0;
    for (int r = 0; r < runs; ++r) s += marchal_tree_root_leaf_distance(n, al, rng);
    const double scale = std::pow(double(n), 1 - 1 / a);
    EXPECT_NEAR(s / runs / scale, exact / scale, 0.03 * exact / scale);
}
