#include <stablegraph/config_model.hpp>
#include <stablegraph/stats.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace stablegraph;

namespace {

const Alpha a54 = Alpha::ratio(5, 4);

}  // namespace

TEST(ConfigModel, PmfValues) {
    const DegreeLaw law(a54);
    EXPECT_EQ(law.exact_pmf(2), 0);
    EXPECT_EQ(law.pmf(2), 0);
    EXPECT_EQ(law.exact_pmf(1), make_rational(72, 77));
    EXPECT_NEAR(law.pmf(1), 72.0 / 77, 1e-15);
    // ratio recursion
    for (int k = 3; k < 40; ++k) EXPECT_EQ(law.exact_pmf(k + 1) / law.exact_pmf(k), (k - 1 - a54.rational()) / (k + 1));
}

TEST(ConfigModel, PmfNormalisedAndTails) {
    for (auto al : {a54, Alpha::ratio(3, 2)}) {
        const DegreeLaw law(al);
        Rational s = 0;
        for (int k = 1; k <= 30; ++k) s += law.exact_pmf(k);
        EXPECT_EQ(s + law.exact_tail(30), 1);
        long double f = 0;
        for (long k = 1; k <= 5000; ++k) f += law.pmf(k);
        EXPECT_NEAR(static_cast<double>(f + law.tail(5000)), 1.0, 1e-12);
        // first-moment tail against a long direct sum
        Rational m = 0;
        for (int k = 1; k <= 12; ++k) m += k * law.exact_pmf(k);
        EXPECT_EQ(m + law.exact_first_moment_tail(12), law.exact_mean());
    }
}

TEST(ConfigModel, MeanIsNotTwo) {
    // tail-summed mean of the printed pmf; the closed form is 2a(1+a)/(a^2+a+2)
    for (auto al : {a54, Alpha::ratio(3, 2)}) {
        const DegreeLaw law(al);
        const Rational a = al.rational();
        EXPECT_EQ(law.exact_mean(), 2 * a * (1 + a) / (a * a + a + 2));
        EXPECT_NEAR(law.mean(), to_double(law.exact_mean()), 1e-12);
    }
    EXPECT_EQ(DegreeLaw(a54).exact_mean(), make_rational(90, 77));
}

TEST(ConfigModel, SizeBiasedPgf) {
    for (auto al : {a54, Alpha::ratio(3, 2)}) {
        const DegreeLaw law(al);
        for (double z : {0.3, 0.5, 0.8})
            EXPECT_NEAR(size_biased_pgf(law, z), z + std::pow(1 - z, al.value) / al.value, 1e-9);
    }
}

TEST(ConfigModel, SamplerMatchesPmf) {
    const DegreeLaw law(a54, 64);
    RandomStream rng(1);
    const int N = 400000;
    std::map<long, int> c;
    long big = 0;
    for (int i = 0; i < N; ++i) {
        const long k = law.sample(rng);
        ASSERT_NE(k, 2);
        if (k <= 8) ++c[k];
        if (k > 64) ++big;
    }
    for (long k : {1, 3, 4, 5, 8}) EXPECT_NEAR(c[k] / double(N), law.pmf(k), 4 * std::sqrt(law.pmf(k) / N) + 1e-6);
    // the power-tail fallback above the table
    EXPECT_NEAR(big / double(N), law.tail(64), 4 * std::sqrt(law.tail(64) / N));
    std::map<long, int> t;
    for (int i = 0; i < 100000; ++i) ++t[law.sample_tail(64, rng)];
    EXPECT_EQ(t.begin()->first, 65);
    EXPECT_NEAR(t[65] / 1e5, law.pmf(65) / law.tail(64), 0.01);
}

TEST(ConfigModel, SmallMatchings) {
    RandomStream rng(2);
    const auto single = pair_half_edges({1, 1}, rng).to_multigraph(2);
    EXPECT_EQ(canonical_code(single), canonical_code(shapes::single_edge()));
    EXPECT_EQ(pair_half_edges({4}, rng).to_multigraph(0), Multigraph(0, 1, {{0, 0, 2}}));
    int loops = 0;
    const int N = 60000;
    for (int i = 0; i < N; ++i) loops += pair_half_edges({2, 2}, rng).to_multigraph(0).self_loops() == 2;
    EXPECT_NEAR(loops / double(N), 1.0 / 3, 0.01);
    EXPECT_THROW(pair_half_edges({1, 2}, rng), std::invalid_argument);
}

TEST(ConfigModel, PairingProbabilities) {
    EXPECT_EQ(config_probability(Multigraph(2, 0, {{0, 1, 1}}), {1, 1}), 1);
    EXPECT_EQ(config_probability(Multigraph(0, 1, {{0, 0, 2}}), {4}), 1);
    EXPECT_EQ(config_probability(Multigraph(0, 2, {{0, 1, 2}}), {2, 2}), make_rational(2, 3));
    EXPECT_EQ(config_probability(Multigraph(0, 2, {{0, 0, 1}, {1, 1, 1}}), {2, 2}), make_rational(1, 3));
}

TEST(ConfigModel, ParityFix) {
    RandomStream rng(3);
    const DegreeLaw law(a54);
    for (int i = 0; i < 2000; ++i) {
        const auto p = sample_configuration(law, 5, rng);
        long sum = 0;
        for (long d : p.degrees) sum += d;
        EXPECT_EQ(sum % 2, 0);
        EXPECT_EQ(static_cast<long>(p.edges.size()), sum / 2);
    }
}

TEST(ConfigModel, ConditionedTree) {
    RandomStream rng(4);
    const auto r = sample_conditioned(0, 2, 4, DegreeLaw(a54), 200, 100000000, rng);
    for (const auto& g : r.graphs) EXPECT_EQ(canonical_code(g), canonical_code(shapes::star3()));
    EXPECT_THROW(sample_conditioned(0, 2, 4, DegreeLaw(a54), 10, 5, rng), std::runtime_error);
}

TEST(ConfigModel, ConditionedSurplusOne) {
    // M_{1,0} has graphs only at m = 2 (root leaf plus one internal vertex)
    const auto d = exact_distribution(1, 0, WeightSeq{a54});
    EXPECT_THROW(restrict_vertex_count(d, 3), std::domain_error);
    const DegreeLaw law(a54);
    for (int m : {2}) {
        const auto dm = restrict_vertex_count(d, m);
        ASSERT_GT(dm.size(), 0u);
        RandomStream rng(5, m);
        FreqTable f;
        while (f.total < 100000)
            for (const auto& g : sample_conditioned_batch(1, 0, m, law, 1000000, rng).graphs) f.add(g);
        EXPECT_LT(tv_distance(f, dm), 0.02) << "m=" << m;
    }
}

TEST(ConfigModel, ConditionedKernelsOneVertex) {
    const auto d = restrict_vertex_count(exact_distribution(2, 0, WeightSeq{a54}), 2);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.rows[0].graph.internal(), 1);
    RandomStream rng(6);
    const auto r = sample_conditioned_batch(2, 0, 2, DegreeLaw(a54), 2000000, rng);
    ASSERT_GT(r.graphs.size(), 100u);
    for (const auto& g : r.graphs) EXPECT_EQ(canonical_code(g), d.rows[0].code);
}
