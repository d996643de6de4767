#pragma once

#include "multigraph.hpp"
#include "rational.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace stablegraph {

// w_0 = 1, w_1 = 0, w_2 = alpha-1, w_k = (k-1-alpha) w_{k-1}.
template <class T>
T marchal_weight(int k, const T& alpha) {
    if (k < 0) throw std::invalid_argument("marchal_weight: negative index");
    if (k == 0) return T(1);
    if (k == 1) return T(0);
    T w = alpha - T(1);
    for (int j = 3; j <= k; ++j) w *= T(j - 1) - alpha;
    return w;
}

struct WeightSeq {
    Alpha alpha;
    Rational exact(int k) const { return marchal_weight<Rational>(k, alpha.rational()); }
    double value(int k) const { return marchal_weight<double>(k, alpha.value); }
};

inline double marchal_weight(int k, const WeightSeq& ws) {
    return ws.alpha.exact ? to_double(ws.exact(k)) : ws.value(k);
}

// Largest internal-vertex count in M_{s,n}. Summing degrees gives
// sum_{v internal} (deg v - 2) = 2s - 2 + (n+1), and each term is at least 1.
inline int max_internal(int s, int n) { return n >= 0 ? 2 * s + n - 1 : 2 * s - 2; }

// Consequently |E| = s - 1 + |V| <= 3s + 2n - 1 (3s - 3 when unrooted).
inline int max_edges(int s, int n) { return s - 1 + (n >= 0 ? n + 1 : 0) + max_internal(s, n); }

struct EnumerationLimits {
    int max_internal = kMaxPermutedInternal;
};

namespace detail {

inline void enumerate_with_internal(int s, int L, int K, std::map<CanonicalCode, Multigraph>& out) {
    const int E = s - 1 + L + K;
    if (K == 0) {
        if (L == 2 && s == 0) {
            Multigraph g(2, 0, {{0, 1, 1}});
            out.emplace(canonical_code(g), g);
        }
        return;
    }
    const int e_int = E - L;
    if (e_int < 0) return;
    const int deg_cap = 2 + (2 * s - 2 + L) - (K - 1);
    if (deg_cap < 3) return;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j) pairs.push_back({i, j});

    std::vector<int> attach(L, 0);
    std::vector<int> deg(K, 0);
    std::vector<int> count(pairs.size(), 0);

    auto emit = [&]() {
        for (int d : deg)
            if (d < 3) return;
        std::vector<Edge> es;
        for (int l = 0; l < L; ++l) es.push_back({l, L + attach[l], 1});
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (count[p] > 0) es.push_back({L + pairs[p].first, L + pairs[p].second, count[p]});
        Multigraph g(L, K, es);
        if (!g.connected()) return;
        out.emplace(canonical_code(g), g);
    };

    auto edges_rec = [&](auto&& self, std::size_t p, int left) -> void {
        if (left == 0) {
            emit();
            return;
        }
        if (p == pairs.size()) return;
        const auto [a, b] = pairs[p];
        const int inc_a = (a == b) ? 2 : 1;
        const int inc_b = (a == b) ? 0 : 1;
        int c = 0;
        while (true) {
            self(self, p + 1, left - c);
            if (c == left) break;
            if (deg[a] + inc_a > deg_cap || deg[b] + inc_b > deg_cap) break;
            deg[a] += inc_a;
            deg[b] += inc_b;
            ++count[p];
            ++c;
        }
        deg[a] -= inc_a * c;
        deg[b] -= inc_b * c;
        count[p] -= c;
    };

    auto leaf_rec = [&](auto&& self, int l) -> void {
        if (l == L) {
            edges_rec(edges_rec, 0, e_int);
            return;
        }
        // leaf 0 may be pinned to internal 0 because internal vertices are interchangeable.
        const int hi = (l == 0) ? 1 : K;
        for (int j = 0; j < hi; ++j) {
            if (deg[j] + 1 > deg_cap) continue;
            attach[l] = j;
            ++deg[j];
            self(self, l + 1);
            --deg[j];
        }
    };
    leaf_rec(leaf_rec, 0);
}

}  // namespace detail

// One representative per isomorphism class of M_{s,n}, ordered by internal
// vertex count then canonical code. n = -1 gives unrooted graphs (s >= 2).
inline std::vector<Multigraph> enumerate_space(int s, int n, EnumerationLimits lim = {}) {
    if (s < 0 || n < -1) throw std::invalid_argument("enumerate_space: bad (s,n)");
    if (n == -1 && s < 2) throw std::invalid_argument("enumerate_space: unrooted graphs need s >= 2");
    const int L = n + 1;
    const int kmax = max_internal(s, n);
    if (kmax > lim.max_internal) throw std::length_error("enumerate_space: size budget exceeded");
    std::vector<Multigraph> all;
    for (int K = 0; K <= std::max(kmax, 0); ++K) {
        std::map<CanonicalCode, Multigraph> found;
        detail::enumerate_with_internal(s, L, K, found);
        for (auto& [code, g] : found) {
            if (g.edge_count() > max_edges(s, n)) throw std::logic_error("edge bound violated");
            all.push_back(g);
        }
    }
    return all;
}

struct GraphRow {
    Multigraph graph;
    CanonicalCode code;
    std::uint64_t sym = 1;
    int sl = 0;
    BigInt mult_product = 1;
    Rational weight_product = 0;  // exact mode
    double weight_value = 0;
};

struct ExactDistribution {
    int s = 0;
    int n = 0;
    Alpha alpha;
    bool brownian = false;
    std::vector<GraphRow> rows;
    std::vector<Rational> exact;  // filled when alpha is rational
    std::vector<double> probs;

    std::size_t size() const { return rows.size(); }

    std::ptrdiff_t index_of(const CanonicalCode& c) const {
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].code == c) return static_cast<std::ptrdiff_t>(i);
        return -1;
    }

    double prob(const CanonicalCode& c) const {
        auto i = index_of(c);
        return i < 0 ? 0.0 : probs[i];
    }

    Rational exact_prob(const CanonicalCode& c) const {
        auto i = index_of(c);
        return i < 0 ? Rational(0) : exact.at(i);
    }
};

inline GraphRow describe(const Multigraph& g, const Alpha& alpha) {
    GraphRow r;
    r.graph = g;
    r.code = canonical_code(g);
    r.sym = symmetry_count(g);
    r.sl = g.self_loops();
    r.mult_product = g.mult_factorial_product();
    const auto deg = g.degrees();
    if (alpha.exact) {
        const Rational a = alpha.rational();
        Rational w = 1;
        for (int v = g.leaves(); v < g.vertex_count(); ++v) w *= marchal_weight<Rational>(deg[v] - 1, a);
        r.weight_product = w;
        r.weight_value = to_double(w);
    } else {
        double w = 1;
        for (int v = g.leaves(); v < g.vertex_count(); ++v) w *= marchal_weight<double>(deg[v] - 1, alpha.value);
        r.weight_value = w;
    }
    return r;
}

namespace detail {

inline ExactDistribution normalize(ExactDistribution d, const std::vector<Rational>& wex, const std::vector<double>& wf) {
    if (d.alpha.exact) {
        Rational total = 0;
        for (const auto& w : wex) total += w;
        if (total == 0) throw std::domain_error("distribution has zero total weight");
        for (const auto& w : wex) {
            d.exact.push_back(w / total);
            d.probs.push_back(to_double(d.exact.back()));
        }
    } else {
        long double total = 0;
        for (double w : wf) total += w;
        if (!(total > 0)) throw std::domain_error("distribution has zero total weight");
        for (double w : wf) d.probs.push_back(static_cast<double>(w / total));
    }
    return d;
}

}  // namespace detail

// P(G) proportional to prod_{v internal} w_{deg v - 1} / (|Sym G| 2^{sl} prod mult!).
inline ExactDistribution exact_distribution(int s, int n, const WeightSeq& ws) {
    ExactDistribution d;
    d.s = s;
    d.n = n;
    d.alpha = ws.alpha;
    std::vector<Rational> wex;
    std::vector<double> wf;
    for (const auto& g : enumerate_space(s, n)) {
        auto row = describe(g, ws.alpha);
        const BigInt den = BigInt(row.sym) * (BigInt(1) << row.sl) * row.mult_product;
        if (ws.alpha.exact) wex.push_back(row.weight_product / Rational(den));
        wf.push_back(row.weight_value / den.convert_to<double>());
        d.rows.push_back(std::move(row));
    }
    return detail::normalize(std::move(d), wex, wf);
}

inline bool all_internal_cubic(const Multigraph& g) {
    const auto deg = g.degrees();
    for (int v = g.leaves(); v < g.vertex_count(); ++v)
        if (deg[v] != 3) return false;
    return true;
}

// Brownian case: support restricted to graphs whose internal vertices all have
// degree 3, P(G) proportional to 1/(|Sym G| 2^{sl} prod mult!).
inline ExactDistribution brownian_distribution(int s, int n) {
    ExactDistribution d;
    d.s = s;
    d.n = n;
    d.alpha = Alpha::ratio(2, 1);
    d.brownian = true;
    std::vector<Rational> wex;
    std::vector<double> wf;
    for (const auto& g : enumerate_space(s, n)) {
        auto row = describe(g, d.alpha);
        const BigInt den = BigInt(row.sym) * (BigInt(1) << row.sl) * row.mult_product;
        const Rational w = all_internal_cubic(g) ? Rational(1) / Rational(den) : Rational(0);
        wex.push_back(w);
        wf.push_back(to_double(w));
        d.rows.push_back(std::move(row));
    }
    return detail::normalize(std::move(d), wex, wf);
}

// Number of ways to choose cyclic orders of half-edges around the vertices of g,
// counted up to isomorphism. Only valid for planted graphs.
inline BigInt ordering_count(const Multigraph& g) {
    if (g.leaves() == 0) throw std::domain_error("ordering_count: undefined for unrooted graphs");
    const auto deg = g.degrees();
    BigInt num = 1;
    for (int v = g.leaves(); v < g.vertex_count(); ++v)
        for (int k = 2; k < deg[v]; ++k) num *= k;
    const BigInt den = BigInt(symmetry_count(g)) * (BigInt(1) << g.self_loops()) * g.mult_factorial_product();
    if (num % den != 0) throw std::logic_error("ordering_count: non-integral count");
    return num / den;
}

}  // namespace stablegraph
