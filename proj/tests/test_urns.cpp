#include <stablegraph/distributions.hpp>
#include <stablegraph/stats.hpp>
#include <stablegraph/urns.hpp>

#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <map>

using namespace stablegraph;

TEST(Urns, PolyaFirstStep) {
    RandomStream rng(1);
    std::map<std::vector<double>, int> count;
    for (int i = 0; i < 20000; ++i) ++count[polya_step(PolyaUrn{{1, 1}, 1}, rng).weights];
    ASSERT_EQ(count.size(), 2u);
    EXPECT_NEAR(count[(std::vector<double>{2, 1})] / 20000.0, 0.5, 0.015);
}

TEST(Urns, PolyaShareKS) {
    RandomStream rng(2);
    std::vector<double> x;
    for (int r = 0; r < 10000; ++r) x.push_back(polya_two_colour(1, 1, 1, {100000}, rng)[0] / 100002.0);
    const auto ks = ks_one_sample(x, [](double t) { return std::clamp(t, 0.0, 1.0); }, 0.001);
    EXPECT_FALSE(ks.reject) << ks.statistic;
    std::vector<double> y;
    for (int r = 0; r < 10000; ++r) y.push_back(polya_two_colour(2, 1, 2, {100000}, rng)[0] / 200003.0);
    // Dir(a/beta) = Beta(1, 1/2)
    EXPECT_FALSE(ks_one_sample(y, [](double t) { return boost::math::ibeta(1.0, 0.5, std::clamp(t, 0.0, 1.0)); }, 0.01).reject);
}

TEST(Urns, PolyaThreeColours) {
    RandomStream rng(3);
    std::vector<double> m(3, 0.0);
    const int R = 2000;
    for (int r = 0; r < R; ++r) {
        PolyaUrn u{{1, 2, 3}, 2};
        for (int t = 0; t < 2000; ++t) u = polya_step(std::move(u), rng);
        for (int k = 0; k < 3; ++k) m[k] += u.weights[k] / u.total();
    }
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(m[k] / R, (k + 1) / 6.0, 0.015);
}

TEST(Urns, CRPFirstStep) {
    const double b = 0.3, t = 0.7;
    RandomStream rng(4);
    int fresh = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
        CRPState st{{1}, 1};
        fresh += crp_step(st, b, t, rng).tables.size() == 2;
    }
    EXPECT_NEAR(fresh / double(N), (t + b) / (1 + t), 0.005);
}

TEST(Urns, CRPTablesScaled) {
    const double b = 1.0 / 3, t = 1.0 / 3;
    const long n = 1000000;
    RandomStream rng(5);
    std::vector<double> x(4000);
    for (auto& v : x) v = crp_table_count(b, t, n, rng) / std::pow(double(n), b);
    // exact finite-n mean; the limit itself is about 1% higher at this n
    EXPECT_NEAR(mean(x), crp_mean_tables(b, t, n) / std::pow(double(n), b), 4 * std_error(x));
    EXPECT_NEAR(crp_mean_tables(b, t, n) / std::pow(double(n), b) / ml_moment({b, t}, 1), 1.0, 0.02);
}

TEST(Urns, CRPLargestShareMatchesStickBreaking) {
    const double b = 0.5, t = 0.5;
    RandomStream rng(6);
    std::vector<double> crp, pd;
    for (int r = 0; r < 2000; ++r) {
        CRPState st{{1}, 1};
        for (int i = 1; i < 5000; ++i) crp_step_with(st, b, t, rng.uniform());
        crp.push_back(*std::max_element(st.tables.begin(), st.tables.end()) / 5000.0);
        pd.push_back(sample_pd(b, t, rng, 400).weights.front());
    }
    for (double qt : {0.25, 0.5, 0.75}) {
        auto a = crp, c = pd;
        const auto k = static_cast<std::size_t>(qt * a.size());
        std::nth_element(a.begin(), a.begin() + k, a.end());
        std::nth_element(c.begin(), c.begin() + k, c.end());
        EXPECT_NEAR(a[k], c[k], 0.03) << "quantile " << qt;
    }
}

TEST(Urns, TriangularBookkeeping) {
    RandomStream rng(7);
    TriangularUrn u{1, 1, 1, 2, 0};
    for (int i = 0; i < 5000; ++i) u = triangular_step(u, rng);
    EXPECT_DOUBLE_EQ(u.black, 1 + 1 + 5000 * 2 - u.red);
    const auto jump = triangular_run({1, 1, 1, 2, 0}, {1000000}, rng);
    EXPECT_GT(jump[0], 0);
    EXPECT_THROW(triangular_step(TriangularUrn{1, 0, 2, 2, 0}, rng), std::invalid_argument);
}

TEST(Urns, TriangularJumpMatchesStepwise) {
    RandomStream rng(8);
    const int R = 20000;
    double a = 0, b = 0;
    for (int r = 0; r < R; ++r) {
        TriangularUrn u{1, 1, 1, 2, 0};
        for (int i = 0; i < 300; ++i) triangular_step_with(u, rng.uniform());
        a += u.red;
        b += triangular_run({1, 1, 1, 2, 0}, {300}, rng)[0];
    }
    EXPECT_NEAR(a / b, 1.0, 0.01);
}

TEST(Urns, TriangularLimits) {
    RandomStream rng(9);
    const long n = 1000000;
    for (auto [a, b] : std::vector<std::pair<double, double>>{{1, 0}, {1, 1}}) {
        std::vector<double> x(4000);
        for (auto& v : x) v = triangular_run({a, b, 1, 2, 0}, {n}, rng)[0] / std::sqrt(double(n));
        const auto rep = moment_check(x, {triangular_limit_moment(a, b, 1, 2, 1), triangular_limit_moment(a, b, 1, 2, 2)},
                                      {1, 2}, 0.02);
        EXPECT_LT(rep.lines[0].rel_error, 0.02);
        if (b == 0) {
            EXPECT_LT(rep.lines[1].rel_error, 0.02);
        }
    }
    // (1,0,1,2): ML(1/2,1/2); (1,1,1,2): Beta(1,1) x ML(1/2,1)
    EXPECT_NEAR(triangular_limit_moment(1, 0, 1, 2, 1), ml_moment({0.5, 0.5}, 1), 1e-12);
    EXPECT_NEAR(triangular_limit_moment(1, 1, 1, 2, 1), 0.5 * ml_moment({0.5, 1.0}, 1), 1e-12);
}

TEST(Urns, ThreeTypeTotalWeight) {
    RandomStream rng(10);
    const auto al = Alpha::ratio(3, 2);
    ThreeTypeUrn u(al, {make_rational(1, 2), make_rational(1), make_rational(3, 2)});
    for (int i = 1; i <= 5000; ++i) {
        u.step(rng);
        ASSERT_EQ(u.total(), make_rational(3) + al.rational() * i);
    }
    EXPECT_THROW(ThreeTypeUrn(Alpha::real(1.5), {make_rational(1)}), std::invalid_argument);
}

TEST(Urns, ThreeTypeShares) {
    RandomStream rng(11);
    const auto al = Alpha::ratio(3, 2);
    const std::vector<Rational> gamma{make_rational(5), make_rational(10), make_rational(15)};
    const int R = 1000;
    std::vector<double> m(3, 0.0);
    for (int r = 0; r < R; ++r) {
        ThreeTypeUrn u(al, gamma);
        while (u.steps() < 100000) u.step(rng);
        double tot = 0;
        for (int i = 0; i < 3; ++i) tot += u.x(i, 2);
        for (int i = 0; i < 3; ++i) m[i] += u.x(i, 2) / tot;
    }
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(m[i] / R / ((i + 1) / 6.0), 1.0, 0.03);
}

TEST(Urns, ThreeTypeVertexWeights) {
    // X^b_1(n) / n^{1/a} against E[D^{1/a}] E[R], D ~ Beta(1/3, 1), R ~ ML(2/3, 1/3)
    const double a = 1.5;
    RandomStream rng(12);
    const std::vector<Rational> gamma(4, make_rational(1, 2));
    const long n = 100000;
    const int R = 3000;
    double s = 0;
    for (int r = 0; r < R; ++r) {
        ThreeTypeUrn u(Alpha::ratio(3, 2), gamma);
        while (u.steps() < n) u.step(rng);
        s += u.x(0, 1) / std::pow(double(n), 1 / a);
    }
    const double oracle = boost::math::beta(1.0 / 3 + 1 / a, 1.0) / boost::math::beta(1.0 / 3, 1.0) * ml_moment({1 / a, 1.0 / 3}, 1);
    EXPECT_NEAR(s / R / oracle, 1.0, 0.04);
}
