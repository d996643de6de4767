#include <stablegraph/distributions.hpp>
#include <stablegraph/stats.hpp>
#include <stablegraph/urns.hpp>

#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <numeric>

using namespace stablegraph;

TEST(Distributions, BetaUniformMean) {
    RandomStream rng(1);
    const int N = 1000000;
    double s = 0;
    for (int i = 0; i < N; ++i) s += sample_beta(1, 1, rng);
    EXPECT_NEAR(s / N, 0.5, 0.002);
}

TEST(Distributions, BetaUniformKS) {
    RandomStream rng(2);
    std::vector<double> x(100000);
    for (auto& v : x) v = sample_beta(1, 1, rng);
    const auto ks = ks_one_sample(x, [](double t) { return std::clamp(t, 0.0, 1.0); }, 0.01);
    EXPECT_FALSE(ks.reject) << ks.statistic << " vs " << ks.threshold;
}

TEST(Distributions, DirichletMeans) {
    RandomStream rng(3);
    const int N = 200000;
    std::vector<double> m(3, 0.0), m2(2, 0.0);
    for (int i = 0; i < N; ++i) {
        const auto d = sample_dirichlet({1, 1, 1}, rng);
        EXPECT_NEAR(std::accumulate(d.begin(), d.end(), 0.0), 1.0, 1e-12);
        for (int k = 0; k < 3; ++k) m[k] += d[k];
        m2[0] += sample_dirichlet({0.3, 1.7}, rng)[0];
    }
    for (double v : m) EXPECT_NEAR(v / N, 1.0 / 3, 0.003);
    EXPECT_NEAR(m2[0] / N, 0.3 / 2.0, 0.002);
}

TEST(Distributions, DirichletMoments) {
    EXPECT_DOUBLE_EQ(dirichlet_moment({1, 1}, {1, 0}), 0.5);
    // E[X^2 Y] for Dir(1/4,3/4) = (1/4)(5/4)(3/4) / (1*2*3)
    const double exact = 0.25 * 1.25 * 0.75 / 6;
    EXPECT_NEAR(dirichlet_moment({0.25, 0.75}, {2, 1}), exact, 1e-15);
    RandomStream rng(4);
    const int N = 1000000;
    double s = 0;
    for (int i = 0; i < N; ++i) {
        const auto d = sample_dirichlet({0.25, 0.75}, rng);
        s += d[0] * d[0] * d[1];
    }
    EXPECT_NEAR(s / N / exact, 1.0, 0.02);
    EXPECT_NEAR(beta_moment(2, 3, 1), 0.4, 1e-15);
}

TEST(Distributions, PoissonDirichlet) {
    RandomStream rng(5);
    for (int r = 0; r < 200; ++r) {
        const auto pd = sample_pd(0.25, 0.25, rng, 100);
        EXPECT_TRUE(std::is_sorted(pd.weights.rbegin(), pd.weights.rend()));
        for (double w : pd.weights) {
            EXPECT_GT(w, 0);
            EXPECT_LT(w, 1);
        }
        EXPECT_NEAR(std::accumulate(pd.weights.begin(), pd.weights.end(), pd.remainder), 1.0, 1e-12);
    }
    std::vector<double> rem;
    for (int r = 0; r < 51; ++r) rem.push_back(sample_pd(0.25, 0.25, rng, 10000).remainder);
    std::nth_element(rem.begin(), rem.begin() + 25, rem.end());
    EXPECT_LT(rem[25], 1e-3);
    EXPECT_THROW(sample_pd(0.25, -0.3, rng, 10), std::invalid_argument);
}

TEST(Distributions, PoissonDirichletSecondMoment) {
    EXPECT_NEAR(pd_mixed_moment(0.25, 0.25, {2}), 0.6, 1e-14);
    // same value from the weight sequence: w_3 Gamma(a-1)/Gamma(a+1) at a = 5/4
    const double a = 1.25;
    EXPECT_NEAR((a - 1) * (2 - a) * std::tgamma(a - 1) / std::tgamma(a + 1), 0.6, 1e-14);
    RandomStream rng(6);
    const int N = 100000;
    double s = 0;
    for (int i = 0; i < N; ++i)
        for (double w : sample_pd(0.25, 0.25, rng, 200).weights) s += w * w;
    EXPECT_NEAR(s / N, 0.6, 0.012);
}

TEST(Distributions, MLMomentForms) {
    for (double b : {0.2, 0.5, 0.8})
        for (double t : {0.1, 0.5, 3.0})
            for (double p : {0.5, 1.0, 2.0, 3.5}) {
                const double x = ml_moment({b, t}, p), y = ml_moment_first_form({b, t}, p);
                EXPECT_NEAR(x / y, 1.0, 1e-12);
            }
    EXPECT_DOUBLE_EQ(ml_moment({0.5, 0.5}, 0), 1.0);
    // ML(1/2,1/2): E[M] = Gamma(3/2) Gamma(3) / (Gamma(2) Gamma(2)) = sqrt(pi)
    EXPECT_NEAR(ml_moment({0.5, 0.5}, 1), std::sqrt(std::acos(-1.0)), 1e-14);
    EXPECT_THROW(ml_moment({1.2, 0.5}, 1), std::invalid_argument);
}

TEST(Distributions, MLSamplerMoments) {
    RandomStream rng(7);
    const std::vector<MLParams> ps{{0.5, 0.5}, {0.2, 0.2}, {2.0 / 3, 0.1}, {0.5, -0.3}, {0.8, 5}, {2.0 / 3, 0}};
    for (const auto& p : ps) {
        std::vector<double> x(100000);
        for (auto& v : x) v = sample_ml(p, rng);
        const auto rep = moment_check(x, {ml_moment(p, 1), ml_moment(p, 2)}, {1, 2}, -4);
        EXPECT_TRUE(rep.pass) << p.beta << "," << p.theta << ": " << rep.lines[0].empirical << " vs "
                              << rep.lines[0].oracle;
    }
}

TEST(Distributions, CRPMeanTables) {
    // exact finite-n mean from the urn recursion
    double e = 1;
    const double b = 0.2, t = 0.2;
    for (long n = 1; n < 200; ++n) e += (t + b * e) / (n + t);
    EXPECT_NEAR(crp_mean_tables(b, t, 200), e, 1e-9);
    RandomStream rng(8);
    const long n = 1000000;
    const int R = 4000;
    double s = 0;
    for (int i = 0; i < R; ++i) s += crp_table_count(b, t, n, rng);
    const double oracle = crp_mean_tables(b, t, n);
    EXPECT_NEAR(s / R / oracle, 1.0, 0.02);
    // the scaled mean sits below the limit by theta / (beta n^beta)
    EXPECT_NEAR(oracle / std::pow(double(n), b), ml_moment({b, t}, 1) - t / (b * std::pow(double(n), b)), 1e-4);
}

TEST(Distributions, FailureRunMatchesStepwise) {
    RandomStream rng(9);
    const double x = 2.5, y = 4.0;
    const int N = 200000;
    std::vector<long> direct(8, 0), jump(8, 0);
    for (int i = 0; i < N; ++i) {
        long j = 0;
        while (j < 7 && rng.uniform() < (x + j) / (y + j)) ++j;
        ++direct[j];
        ++jump[failure_run(x, y, 7, rng)];
    }
    for (int j = 0; j < 8; ++j) EXPECT_NEAR(direct[j] / double(N), jump[j] / double(N), 0.006);
}

TEST(Distributions, SizeBiasedSplit) {
    RandomStream rng(10);
    const int N = 1000000;
    long ones = 0;
    double cond = 0;
    long sym = 0;
    for (int i = 0; i < N; ++i) {
        const auto s = size_biased_split({1, 3}, rng);
        ones += s.index == 0;
        const auto t = size_biased_split({1, 1}, rng);
        if (t.index == 0) {
            ++sym;
            cond += t.vector[0];
        }
    }
    EXPECT_NEAR(ones / double(N), 0.25, 0.002);
    EXPECT_NEAR(sym / double(N), 0.5, 0.002);
    EXPECT_NEAR(cond / sym, 2.0 / 3, 0.002);
}

TEST(Distributions, StableMarginal) {
    // two-leaf ordered shape: three edges, one vertex of degree 3
    const double a = 1.5;
    const StableMarginalLaw law{3, {3}, a, 20};
    RandomStream rng(11);
    const int N = 100000;
    std::vector<double> total(N);
    double len = 0;
    for (int i = 0; i < N; ++i) {
        const auto m = sample_stable_marginal(law, rng);
        EXPECT_NEAR(std::accumulate(m.masses.begin(), m.masses.end(), 0.0), 1.0, 1e-12);
        total[i] = std::accumulate(m.local_times.begin(), m.local_times.end(), 0.0);
        len += m.lengths[0];
    }
    const MLParams nt{1 / a, 2 - 1 / a};
    EXPECT_TRUE(moment_check(total, {ml_moment(nt, 1), ml_moment(nt, 2)}, {1, 2}, 0.02).pass);
    // E[L(e_1)] = E[D^{1-1/a}] E[R^{a-1}] E[Rbar] with D ~ Beta(1/3, 1)
    const double exact = boost::math::beta(1.0 / 3 + 1 - 1 / a, 1.0) / boost::math::beta(1.0 / 3, 1.0) *
                         ml_moment({1 / a, (a - 1) / a}, a - 1) * ml_moment({a - 1, a - 1}, 1);
    EXPECT_NEAR(len / N / exact, 1.0, 0.01);
    // the same mean read off the three-type urn: X^a_1(n) / ((a-1) n^{1-1/a})
    const std::vector<Rational> gamma(4, make_rational(1, 2));
    const long n = 10000;
    const int reps = 10000;
    double urn = 0;
    for (int r = 0; r < reps; ++r) {
        ThreeTypeUrn u(Alpha::ratio(3, 2), gamma);
        while (u.steps() < n) u.step(rng);
        urn += u.x(0, 0) / ((a - 1) * std::pow(double(n), 1 - 1 / a));
    }
    EXPECT_NEAR(urn / reps / (len / N), 1.0, 0.03);
}
