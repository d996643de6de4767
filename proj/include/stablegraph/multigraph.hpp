#pragma once

#include "rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace stablegraph {

struct Edge {
    int u = 0;
    int v = 0;
    int mult = 1;
    bool loop() const { return u == v; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

// Planted multigraph with labelled leaves and unlabelled internal vertices.
// Vertex ids: leaves are 0..leaves-1 (leaf i carries label i, leaf 0 is the
// root), internal vertices follow as leaves..leaves+internal-1. An unrooted
// graph (n = -1) has no leaves at all.
class Multigraph {
public:
    Multigraph() = default;

    Multigraph(int leaves, int internal, std::vector<Edge> edges) : leaves_(leaves), internal_(internal) {
        if (leaves < 0 || internal < 0) throw std::invalid_argument("negative vertex count");
        std::vector<Edge> norm;
        for (auto e : edges) {
            if (e.mult < 1) throw std::invalid_argument("edge multiplicity must be >= 1");
            if (e.u < 0 || e.v < 0 || e.u >= vertex_count() || e.v >= vertex_count())
                throw std::invalid_argument("edge endpoint out of range");
            if (e.u > e.v) std::swap(e.u, e.v);
            norm.push_back(e);
        }
        std::sort(norm.begin(), norm.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.u, a.v) < std::tie(b.u, b.v);
        });
        for (const auto& e : norm) {
            if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v)
                edges_.back().mult += e.mult;
            else
                edges_.push_back(e);
        }
    }

    int leaves() const { return leaves_; }
    int internal() const { return internal_; }
    int n() const { return leaves_ - 1; }
    int vertex_count() const { return leaves_ + internal_; }
    bool is_leaf(int v) const { return v < leaves_; }
    int internal_id(int j) const { return leaves_ + j; }
    const std::vector<Edge>& edges() const { return edges_; }

    int edge_count() const {
        int m = 0;
        for (const auto& e : edges_) m += e.mult;
        return m;
    }

    int surplus() const { return edge_count() - vertex_count() + 1; }

    int degree(int v) const {
        if (v < 0 || v >= vertex_count()) throw std::out_of_range("unknown vertex");
        int d = 0;
        for (const auto& e : edges_) {
            if (e.u == v) d += e.mult;
            if (e.v == v) d += e.mult;
        }
        return d;
    }

    std::vector<int> degrees() const {
        std::vector<int> d(vertex_count(), 0);
        for (const auto& e : edges_) {
            d[e.u] += e.mult;
            d[e.v] += e.mult;
        }
        return d;
    }

    int self_loops() const {
        int s = 0;
        for (const auto& e : edges_)
            if (e.loop()) s += e.mult;
        return s;
    }

    BigInt mult_factorial_product() const {
        BigInt p = 1;
        for (const auto& e : edges_)
            for (int k = 2; k <= e.mult; ++k) p *= k;
        return p;
    }

    bool connected() const {
        const int V = vertex_count();
        if (V == 0) return false;
        std::vector<int> parent(V);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        int comps = V;
        for (const auto& e : edges_) {
            int a = find(e.u), b = find(e.v);
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
        return comps == 1;
    }

    // Dense adjacency with multiplicities; a self-loop of multiplicity m is stored as m on the diagonal.
    std::vector<int> adjacency() const {
        const int V = vertex_count();
        std::vector<int> a(static_cast<std::size_t>(V) * V, 0);
        for (const auto& e : edges_) {
            a[e.u * V + e.v] += e.mult;
            if (e.u != e.v) a[e.v * V + e.u] += e.mult;
        }
        return a;
    }

    // Relabel internal vertices: internal j becomes internal perm[j].
    Multigraph relabel(const std::vector<int>& perm) const {
        std::vector<Edge> es;
        for (auto e : edges_) {
            if (!is_leaf(e.u)) e.u = leaves_ + perm[e.u - leaves_];
            if (!is_leaf(e.v)) e.v = leaves_ + perm[e.v - leaves_];
            es.push_back(e);
        }
        return Multigraph(leaves_, internal_, es);
    }

    friend bool operator==(const Multigraph& a, const Multigraph& b) {
        return a.leaves_ == b.leaves_ && a.internal_ == b.internal_ && a.edges_ == b.edges_;
    }

private:
    int leaves_ = 0;
    int internal_ = 0;
    std::vector<Edge> edges_;
};

inline int surplus(const Multigraph& g) { return g.surplus(); }
inline int degree(const Multigraph& g, int v) { return g.degree(v); }

constexpr int kMaxPermutedInternal = 9;

namespace detail {

// Isomorphism-invariant key for an internal vertex, used to cut the permutation search.
inline std::vector<int> vertex_invariant(const Multigraph& g, const std::vector<int>& adj, int v) {
    const int V = g.vertex_count();
    std::vector<int> key;
    int deg = 0;
    for (int w = 0; w < V; ++w) deg += (w == v ? 2 : 1) * adj[v * V + w];
    key.push_back(deg);
    key.push_back(adj[v * V + v]);
    for (int l = 0; l < g.leaves(); ++l) key.push_back(adj[v * V + l]);
    std::vector<int> nb;
    for (int w = g.leaves(); w < V; ++w)
        if (w != v) nb.push_back(adj[v * V + w]);
    std::sort(nb.begin(), nb.end());
    key.insert(key.end(), nb.begin(), nb.end());
    return key;
}

// Internal vertices grouped into classes of equal invariant, classes in sorted order.
inline std::vector<std::vector<int>> invariant_classes(const Multigraph& g, const std::vector<int>& adj) {
    std::vector<std::pair<std::vector<int>, int>> keyed;
    for (int j = 0; j < g.internal(); ++j) keyed.push_back({vertex_invariant(g, adj, g.leaves() + j), j});
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::vector<int>> classes;
    for (std::size_t i = 0; i < keyed.size(); ++i) {
        if (i == 0 || keyed[i].first != keyed[i - 1].first) classes.emplace_back();
        classes.back().push_back(keyed[i].second);
    }
    return classes;
}

// Calls f(order) for every ordering of internal vertices that lists the
// classes consecutively; order[k] is the internal vertex placed at slot k.
template <class F>
void for_each_class_order(const std::vector<std::vector<int>>& classes, F&& f) {
    std::vector<std::vector<int>> cur = classes;
    for (auto& c : cur) std::sort(c.begin(), c.end());
    std::vector<int> order;
    auto rec = [&](auto&& self, std::size_t ci) -> void {
        if (ci == cur.size()) {
            f(order);
            return;
        }
        auto& c = cur[ci];
        std::sort(c.begin(), c.end());
        do {
            const auto mark = order.size();
            order.insert(order.end(), c.begin(), c.end());
            self(self, ci + 1);
            order.resize(mark);
        } while (std::next_permutation(c.begin(), c.end()));
    };
    rec(rec, 0);
}

}  // namespace detail

// Number of internal-vertex permutations preserving the edge multiset (leaves fixed).
inline std::uint64_t symmetry_count(const Multigraph& g) {
    if (g.internal() > kMaxPermutedInternal) throw std::length_error("symmetry_count: too many internal vertices");
    const auto adj = g.adjacency();
    const int V = g.vertex_count();
    const int L = g.leaves();
    std::vector<int> perm(g.internal());
    std::iota(perm.begin(), perm.end(), 0);
    std::uint64_t count = 0;
    do {
        bool ok = true;
        auto img = [&](int v) { return v < L ? v : L + perm[v - L]; };
        for (int u = 0; u < V && ok; ++u)
            for (int v = u; v < V; ++v)
                if (adj[u * V + v] != adj[img(u) * V + img(v)]) {
                    ok = false;
                    break;
                }
        if (ok) ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

using CanonicalCode = std::vector<std::uint8_t>;

// Lexicographically smallest adjacency encoding over internal relabellings that
// respect the invariant classes. Equal codes iff the graphs are isomorphic with
// leaves fixed.
inline CanonicalCode canonical_code(const Multigraph& g) {
    if (g.internal() > kMaxPermutedInternal) throw std::length_error("canonical_code: too many internal vertices");
    const auto adj = g.adjacency();
    const int V = g.vertex_count();
    const int L = g.leaves();
    for (int x : adj)
        if (x > 255) throw std::length_error("canonical_code: multiplicity too large");
    const auto classes = detail::invariant_classes(g, adj);

    CanonicalCode header;
    header.push_back(static_cast<std::uint8_t>(L));
    header.push_back(static_cast<std::uint8_t>(g.internal()));
    // Class sizes and keys are isomorphism invariants, so they go in the header.
    for (const auto& c : classes) {
        const auto key = detail::vertex_invariant(g, adj, L + c.front());
        header.push_back(static_cast<std::uint8_t>(c.size()));
        for (int k : key) header.push_back(static_cast<std::uint8_t>(k));
        header.push_back(0xff);
    }

    CanonicalCode best;
    bool have = false;
    CanonicalCode cur;
    detail::for_each_class_order(classes, [&](const std::vector<int>& order) {
        // slot index k -> original vertex
        cur.clear();
        auto orig = [&](int x) { return x < L ? x : L + order[x - L]; };
        for (int a = 0; a < V; ++a)
            for (int b = a; b < V; ++b) cur.push_back(static_cast<std::uint8_t>(adj[orig(a) * V + orig(b)]));
        if (!have || cur < best) {
            best = cur;
            have = true;
        }
    });
    CanonicalCode out = header;
    out.insert(out.end(), best.begin(), best.end());
    return out;
}

inline std::string to_hex(const CanonicalCode& c) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (auto b : c) {
        s.push_back(d[b >> 4]);
        s.push_back(d[b & 15]);
    }
    return s;
}

inline bool validate_membership(const Multigraph& g, int s, int n) {
    if (n < -1) return false;
    if (n == -1) {
        if (g.leaves() != 0 || s < 2) return false;
    } else if (g.leaves() != n + 1) {
        return false;
    }
    if (g.vertex_count() == 0 || !g.connected() || g.surplus() != s) return false;
    const auto d = g.degrees();
    for (int v = 0; v < g.vertex_count(); ++v) {
        if (g.is_leaf(v) && d[v] != 1) return false;
        if (!g.is_leaf(v) && d[v] < 3) return false;
    }
    return true;
}

// Representative graphs used throughout tests and the CLI.
namespace shapes {

inline Multigraph single_edge() { return Multigraph(2, 0, {{0, 1, 1}}); }

inline Multigraph star3() { return Multigraph(3, 1, {{0, 3, 1}, {1, 3, 1}, {2, 3, 1}}); }

inline Multigraph lollipop() { return Multigraph(1, 1, {{0, 1, 1}, {1, 1, 1}}); }

inline Multigraph figure_eight() { return Multigraph(1, 1, {{0, 1, 1}, {1, 1, 2}}); }

inline Multigraph theta() { return Multigraph(1, 2, {{0, 1, 1}, {1, 2, 3}}); }

}  // namespace shapes

}  // namespace stablegraph
