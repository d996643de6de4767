#pragma once

#include "multigraph.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace stablegraph {

// P(D=1) = 2(1+a)/(a^2+a+2), P(D=k) = 2(1+a)a/(a^2+a+2) * w_{k-1}/k! for k >= 2.
class DegreeLaw {
public:
    static constexpr int kDefaultTable = 1 << 16;

    explicit DegreeLaw(const Alpha& alpha, int table_size = kDefaultTable) : alpha_(alpha), kmax_(table_size) {
        if (alpha.brownian()) throw std::invalid_argument("degree law needs alpha < 2");
        const double a = alpha.value;
        p1_ = 2 * (1 + a) / (a * a + a + 2);
        c_ = p1_ * a;
        cdf_.resize(kmax_ + 1, 0.0);
        cdf_[1] = p1_;
        double p = c_ * (a - 1) / 6.0;  // k = 3
        pmf_.assign(kmax_ + 1, 0.0);
        pmf_[1] = p1_;
        for (int k = 3; k <= kmax_; ++k) {
            pmf_[k] = p;
            p *= (k - 1 - a) / (k + 1);
        }
        for (int k = 2; k <= kmax_; ++k) cdf_[k] = cdf_[k - 1] + pmf_[k];
        log_tail_const_ = std::log(c_ * (a - 1) / (std::tgamma(2 - a) * (1 + a)));
    }

    const Alpha& alpha() const { return alpha_; }
    int table_size() const { return kmax_; }

    double pmf(long k) const {
        if (k < 1) throw std::invalid_argument("degree_pmf: k >= 1");
        if (k <= kmax_) return pmf_[k];
        return std::exp(log_pmf(k));
    }

    Rational exact_pmf(int k) const {
        if (k < 1) throw std::invalid_argument("degree_pmf: k >= 1");
        const Rational a = alpha_.rational();
        const Rational den = a * a + a + 2;
        if (k == 1) return 2 * (1 + a) / den;
        Rational f = 1;
        for (int j = 2; j <= k; ++j) f *= j;
        return 2 * (1 + a) * a / den * marchal_weight<Rational>(k - 1, a) / f;
    }

    // Sum_{k > K} P(D = k), K >= 2.
    double tail(long K) const {
        if (K < 2) throw std::invalid_argument("tail: K >= 2");
        return pmf(K) * (K - 1 - alpha_.value) / (1 + alpha_.value);
    }
    Rational exact_tail(int K) const {
        if (K < 2) throw std::invalid_argument("tail: K >= 2");
        const Rational a = alpha_.rational();
        return exact_pmf(K) * (K - 1 - a) / (1 + a);
    }

    // Sum_{k > K} k P(D = k), K >= 2.
    double first_moment_tail(long K) const {
        if (K < 2) throw std::invalid_argument("tail: K >= 2");
        return pmf(K) * K * (K - 1 - alpha_.value) / alpha_.value;
    }
    Rational exact_first_moment_tail(int K) const {
        if (K < 2) throw std::invalid_argument("tail: K >= 2");
        const Rational a = alpha_.rational();
        return exact_pmf(K) * K * (K - 1 - a) / a;
    }

    // E[D], as a partial sum over k <= K plus the closed-form tail.
    double mean(long K = 64) const {
        long double m = 0;
        for (long k = 1; k <= K; ++k) m += k * pmf(k);
        return static_cast<double>(m + first_moment_tail(K));
    }
    Rational exact_mean(int K = 16) const {
        Rational m = 0;
        for (int k = 1; k <= K; ++k) m += k * exact_pmf(k);
        return m + exact_first_moment_tail(K);
    }

    long sample(RandomStream& rng) const {
        const double u = rng.uniform();
        if (u < p1_) return 1;
        if (u < cdf_[kmax_]) {
            const auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), u);
            return it - cdf_.begin();
        }
        return sample_tail(kmax_, rng);
    }

    // Draw from the law of D given D > K, inverting the exact tail.
    long sample_tail(long K, RandomStream& rng) const {
        const double lu = std::log(rng.uniform()) + log_tail(K);
        long lo = K, hi = K + 1;
        while (log_tail(hi) >= lu) {
            lo = hi;
            hi = hi * 2;
        }
        while (hi - lo > 1) {
            const long mid = lo + (hi - lo) / 2;
            if (log_tail(mid) >= lu)
                lo = mid;
            else
                hi = mid;
        }
        return hi;
    }

private:
    // k >= 3: pmf(k) = c (a-1) Gamma(k-1-a) / (Gamma(2-a) k!)
    double log_pmf(long k) const {
        const double a = alpha_.value;
        return std::log(c_ * (a - 1) / std::tgamma(2 - a)) + std::lgamma(k - 1 - a) - std::lgamma(k + 1.0);
    }
    double log_tail(long K) const {
        const double a = alpha_.value;
        return log_tail_const_ + std::lgamma(K - a) - std::lgamma(K + 1.0);
    }

    Alpha alpha_;
    int kmax_;
    double p1_ = 0, c_ = 0, log_tail_const_ = 0;
    std::vector<double> pmf_;
    std::vector<double> cdf_;
};

inline double degree_pmf(const DegreeLaw& law, long k) { return law.pmf(k); }

// sum_k P(D^ - 1 = k) z^k with P(D^ = k) = k P(D = k) / E[D]; the tail is summed
// until z^K times the first-moment tail drops below `eps`.
inline double size_biased_pgf(const DegreeLaw& law, double z, double eps = 1e-17) {
    if (!(z >= 0 && z < 1)) throw std::invalid_argument("size_biased_pgf: z in [0,1)");
    long double s = law.pmf(1);
    long double zk = z * z;  // z^{k-1} at k = 3
    for (long k = 3;; ++k, zk *= z) {
        s += k * law.pmf(k) * zk;
        if (zk * law.first_moment_tail(k) < eps) break;
    }
    return static_cast<double>(s / law.mean());
}

inline std::vector<long> sample_degrees(const DegreeLaw& law, int m, RandomStream& rng) {
    std::vector<long> d(m);
    for (auto& x : d) x = law.sample(rng);
    return d;
}

// Outcome of matching half-edges on labelled vertices 0..m-1.
struct Pairing {
    std::vector<long> degrees;
    std::vector<std::pair<int, int>> edges;

    struct Component {
        std::vector<int> vertices;
        long edges = 0;
        long surplus() const { return edges - static_cast<long>(vertices.size()) + 1; }
    };

    std::vector<Component> components() const {
        const int m = static_cast<int>(degrees.size());
        std::vector<int> parent(m);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [a, b] : edges) parent[find(a)] = find(b);
        std::vector<int> slot(m, -1);
        std::vector<Component> out;
        for (int v = 0; v < m; ++v) {
            const int r = find(v);
            if (slot[r] < 0) {
                slot[r] = static_cast<int>(out.size());
                out.emplace_back();
            }
            out[slot[r]].vertices.push_back(v);
        }
        for (auto [a, b] : edges) ++out[slot[find(a)]].edges;
        return out;
    }

    // Vertices 0..leaves-1 become leaves, the rest internal (in label order).
    Multigraph to_multigraph(int leaves) const {
        const int m = static_cast<int>(degrees.size());
        std::vector<Edge> es;
        for (auto [a, b] : edges) es.push_back({a, b, 1});
        return Multigraph(leaves, m - leaves, es);
    }
};

// Uniform perfect matching of the labelled half-edges.
inline Pairing pair_half_edges(const std::vector<long>& degrees, RandomStream& rng) {
    std::vector<int> half;
    for (std::size_t v = 0; v < degrees.size(); ++v) {
        if (degrees[v] < 0) throw std::invalid_argument("pair_half_edges: negative degree");
        for (long k = 0; k < degrees[v]; ++k) half.push_back(static_cast<int>(v));
    }
    if (half.size() % 2) throw std::invalid_argument("pair_half_edges: odd number of half-edges");
    Pairing p;
    p.degrees = degrees;
    // Fisher-Yates, then pair consecutive entries
    for (std::size_t i = half.size(); i > 1; --i) std::swap(half[i - 1], half[rng.below(i)]);
    for (std::size_t i = 0; i < half.size(); i += 2) p.edges.push_back({half[i], half[i + 1]});
    return p;
}

// Unconditioned model on m vertices; an odd degree sum is fixed by adding one to the last degree.
inline Pairing sample_configuration(const DegreeLaw& law, int m, RandomStream& rng) {
    auto d = sample_degrees(law, m, rng);
    if (std::accumulate(d.begin(), d.end(), 0L) % 2) ++d.back();
    return pair_half_edges(d, rng);
}

// Probability that the configuration model with these degrees (vertices labelled
// as in g) produces g: prod d_i! / ((sum d - 1)!! 2^sl prod mult!).
inline Rational config_probability(const Multigraph& g, const std::vector<long>& degrees) {
    const auto d = g.degrees();
    if (d.size() != degrees.size()) throw std::invalid_argument("config_probability: degree count mismatch");
    long total = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] != degrees[i]) throw std::invalid_argument("config_probability: degree mismatch");
        total += degrees[i];
    }
    BigInt num = 1;
    for (long x : degrees)
        for (long k = 2; k <= x; ++k) num *= k;
    BigInt dfact = 1;
    for (long k = total - 1; k > 1; k -= 2) dfact *= k;
    const BigInt den = dfact * (BigInt(1) << g.self_loops()) * g.mult_factorial_product();
    return Rational(num, den);
}

struct ConditionedResult {
    std::vector<Multigraph> graphs;
    std::int64_t attempts = 0;
};

// Rejection sampler for the configuration model given: vertices 0..n have degree 1,
// the others degree >= 3, and the matching is connected with surplus s. Runs exactly
// `attempts` trials and returns every acceptance.
inline ConditionedResult sample_conditioned_batch(int s, int n, int m, const DegreeLaw& law, std::int64_t attempts,
                                                  RandomStream& rng) {
    if (n < 0 || m < n + 1) throw std::invalid_argument("sample_conditioned: need m >= n+1, n >= 0");
    const long target = 2L * (s + m - 1);  // degree sum forced by the surplus
    ConditionedResult res;
    std::vector<long> d(m);
    for (std::int64_t t = 0; t < attempts; ++t) {
        ++res.attempts;
        bool ok = true;
        long sum = 0;
        for (int v = 0; v < m && ok; ++v) {
            d[v] = law.sample(rng);
            if (v <= n)
                ok = d[v] == 1;
            else
                ok = d[v] >= 3;
            sum += d[v];
            if (sum + 3L * (m - 1 - v) - (v < n ? 2L * (n - v) : 0L) > target) ok = false;
        }
        if (!ok || sum != target) continue;
        const auto p = pair_half_edges(d, rng);
        const auto comps = p.components();
        if (comps.size() != 1) continue;
        res.graphs.push_back(p.to_multigraph(n + 1));
    }
    return res;
}

// Keeps drawing until `samples` acceptances or `budget` attempts; throws when the budget runs out.
inline ConditionedResult sample_conditioned(int s, int n, int m, const DegreeLaw& law, int samples, std::int64_t budget,
                                            RandomStream& rng) {
    ConditionedResult res;
    while (static_cast<int>(res.graphs.size()) < samples) {
        if (res.attempts >= budget)
            throw std::runtime_error("sample_conditioned: budget exhausted after " + std::to_string(res.attempts) +
                                     " attempts with " + std::to_string(res.graphs.size()) + " acceptances");
        auto r = sample_conditioned_batch(s, n, m, law, 1, rng);
        res.attempts += r.attempts;
        for (auto& g : r.graphs) res.graphs.push_back(std::move(g));
    }
    return res;
}

// exact_distribution(s, n) restricted to graphs with m vertices in total and renormalized.
inline ExactDistribution restrict_vertex_count(const ExactDistribution& d, int m) {
    ExactDistribution out;
    out.s = d.s;
    out.n = d.n;
    out.alpha = d.alpha;
    out.brownian = d.brownian;
    std::vector<Rational> wex;
    std::vector<double> wf;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.rows[i].graph.vertex_count() != m) continue;
        out.rows.push_back(d.rows[i]);
        if (d.alpha.exact) wex.push_back(d.exact[i]);
        wf.push_back(d.probs[i]);
    }
    if (out.rows.empty()) throw std::domain_error("restrict_vertex_count: no graph with that vertex count");
    return detail::normalize(std::move(out), wex, wf);
}

}  // namespace stablegraph
