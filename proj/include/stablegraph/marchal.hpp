#pragma once

#include "multigraph.hpp"
#include "plane_tree.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stablegraph {

// Mutable multigraph with individually stored edge copies, sized for fast
// Marchal growth. Vertices are numbered in creation order.
class GrowthGraph {
public:
    GrowthGraph() = default;

    explicit GrowthGraph(const Multigraph& g) {
        for (int v = 0; v < g.vertex_count(); ++v) {
            const int id = add_vertex(g.is_leaf(v) ? v : -1);
            (void)id;
        }
        for (const auto& e : g.edges())
            for (int k = 0; k < e.mult; ++k) add_copy(e.u, e.v);
        for (int v = g.leaves(); v < g.vertex_count(); ++v)
            for (int k = 1; k < deg_[v]; ++k) slots_.push_back(v);
    }

    int vertex_count() const { return static_cast<int>(deg_.size()); }
    int leaf_count() const { return static_cast<int>(leaf_vertex_.size()); }
    int internal_count() const { return internal_; }
    std::int64_t copies() const { return static_cast<std::int64_t>(copies_.size()); }
    const std::vector<std::pair<int, int>>& edge_copies() const { return copies_; }
    int degree(int v) const { return deg_[v]; }
    bool is_leaf(int v) const { return label_[v] >= 0; }
    int label(int v) const { return label_[v]; }
    int leaf_vertex(int label) const { return leaf_vertex_.at(label); }
    // sum over internal vertices of (deg - 1)
    std::int64_t internal_degree_excess() const { return static_cast<std::int64_t>(slots_.size()); }
    const std::vector<int>& vertex_slots() const { return slots_; }

    // New leaf with the next label hanging from internal vertex v.
    void attach_leaf(int v) {
        const int leaf = add_vertex(leaf_count());
        add_copy(v, leaf);
        slots_.push_back(v);
    }

    // Split edge copy c with a fresh degree-3 vertex carrying a new leaf.
    void split_copy(std::size_t c) {
        const auto [a, b] = copies_.at(c);
        const int w = add_vertex(-1);
        const int leaf = add_vertex(leaf_count());
        copies_[c] = {a, w};
        ++deg_[w];
        copies_.push_back({w, b});
        ++deg_[w];
        add_copy(w, leaf);
        slots_.push_back(w);
        slots_.push_back(w);
    }

    Multigraph to_multigraph() const {
        const int L = leaf_count();
        std::vector<int> id(vertex_count());
        int next = L;
        for (int v = 0; v < vertex_count(); ++v) id[v] = is_leaf(v) ? label_[v] : next++;
        std::vector<Edge> es;
        es.reserve(copies_.size());
        for (auto [a, b] : copies_) es.push_back({id[a], id[b], 1});
        return Multigraph(L, internal_, es);
    }

    std::vector<std::vector<int>> adjacency_lists() const {
        std::vector<std::vector<int>> adj(vertex_count());
        for (auto [a, b] : copies_) {
            adj[a].push_back(b);
            if (a != b) adj[b].push_back(a);
        }
        return adj;
    }

    // Graph distances (edge count) from vertex `src`.
    std::vector<int> bfs(int src) const {
        const auto adj = adjacency_lists();
        std::vector<int> dist(vertex_count(), -1);
        std::queue<int> q;
        dist[src] = 0;
        q.push(src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int w : adj[v])
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    q.push(w);
                }
        }
        return dist;
    }

private:
    int add_vertex(int label) {
        deg_.push_back(0);
        label_.push_back(label);
        if (label >= 0) {
            if (label != leaf_count()) throw std::logic_error("leaves must be created in label order");
            leaf_vertex_.push_back(vertex_count() - 1);
        } else {
            ++internal_;
        }
        return vertex_count() - 1;
    }
    void add_copy(int a, int b) {
        copies_.push_back({a, b});
        ++deg_[a];
        ++deg_[b];
    }

    std::vector<int> deg_;
    std::vector<int> label_;
    std::vector<int> leaf_vertex_;
    std::vector<std::pair<int, int>> copies_;
    std::vector<int> slots_;  // internal vertex v appears deg(v)-1 times
    int internal_ = 0;
};

struct MarchalState {
    Alpha alpha;
    int s = 0;
    int n = 0;
    GrowthGraph graph;

    static MarchalState from(const Multigraph& g, const Alpha& alpha) {
        MarchalState st;
        st.alpha = alpha;
        st.s = g.surplus();
        st.n = g.n();
        st.graph = GrowthGraph(g);
        return st;
    }

    // Total weight times Q (exact mode): edges (P-Q) each, internal v gets Q(deg-1)-P.
    std::int64_t scaled_total_weight() const {
        if (!alpha.exact) throw std::logic_error("scaled weights need rational alpha");
        std::int64_t w = (alpha.p - alpha.q) * graph.copies();
        for (int v = 0; v < graph.vertex_count(); ++v)
            if (!graph.is_leaf(v)) w += alpha.q * (graph.degree(v) - 1) - alpha.p;
        return w;
    }

    Rational total_weight() const { return make_rational(scaled_total_weight(), alpha.q); }

    double total_weight_value() const {
        double w = (alpha.value - 1.0) * static_cast<double>(graph.copies());
        for (int v = 0; v < graph.vertex_count(); ++v)
            if (!graph.is_leaf(v)) w += graph.degree(v) - 1 - alpha.value;
        return w;
    }

    // alpha(s+n) + s - 1
    Rational predicted_total_weight() const { return alpha.rational() * (s + n) + (s - 1); }
};

// One step of the multigraph Marchal algorithm, in place. Exact mode draws an
// integer below the scaled total weight, so choices never depend on rounding.
inline void marchal_step_inplace(MarchalState& st, RandomStream& rng) {
    auto& g = st.graph;
    const std::int64_t copies = g.copies();
    if (st.alpha.exact) {
        const std::int64_t P = st.alpha.p, Q = st.alpha.q;
        const std::int64_t we = (P - Q) * copies;
        const std::int64_t wv = Q * g.internal_degree_excess() - P * g.internal_count();
        const std::int64_t total = we + wv;
        if (total <= 0) throw std::logic_error("marchal step: zero total weight");
        const auto r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        if (r < we) {
            g.split_copy(static_cast<std::size_t>(r / (P - Q)));
        } else {
            const auto& slots = g.vertex_slots();
            while (true) {
                const int v = slots[rng.below(slots.size())];
                const std::int64_t room = Q * (g.degree(v) - 1);
                if (static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(room))) < room - P) {
                    g.attach_leaf(v);
                    break;
                }
            }
        }
    } else {
        const double a = st.alpha.value;
        const double we = (a - 1.0) * static_cast<double>(copies);
        const double wv = static_cast<double>(g.internal_degree_excess()) - a * g.internal_count();
        const double u = rng.uniform() * (we + std::max(wv, 0.0));
        if (u < we) {
            g.split_copy(std::min<std::size_t>(static_cast<std::size_t>(u / (a - 1.0)), copies - 1));
        } else {
            const auto& slots = g.vertex_slots();
            while (true) {
                const int v = slots[rng.below(slots.size())];
                const double d1 = g.degree(v) - 1;
                if (rng.uniform() * d1 < d1 - a) {
                    g.attach_leaf(v);
                    break;
                }
            }
        }
    }
    ++st.n;
}

inline MarchalState marchal_graph_step(MarchalState st, RandomStream& rng) {
    marchal_step_inplace(st, rng);
    return st;
}

inline std::vector<MarchalState> grow(const MarchalState& start, int steps, RandomStream& rng) {
    if (steps < 0) throw std::invalid_argument("grow: negative step count");
    std::vector<MarchalState> traj{start};
    traj.reserve(steps + 1);
    for (int i = 0; i < steps; ++i) traj.push_back(marchal_graph_step(traj.back(), rng));
    return traj;
}

// Multigraph with a new leaf (label n+1) attached to vertex v.
inline Multigraph attach_leaf(const Multigraph& g, int v) {
    const int L = g.leaves();
    auto shift = [&](int x) { return x < L ? x : x + 1; };
    std::vector<Edge> es;
    for (auto e : g.edges()) es.push_back({shift(e.u), shift(e.v), e.mult});
    es.push_back({L, shift(v), 1});
    return Multigraph(L + 1, g.internal(), es);
}

// Multigraph with one copy of edge `index` split by a new vertex carrying leaf n+1.
inline Multigraph split_edge(const Multigraph& g, std::size_t index) {
    const int L = g.leaves();
    auto shift = [&](int x) { return x < L ? x : x + 1; };
    const int w = g.vertex_count() + 1;
    std::vector<Edge> es;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        auto e = g.edges()[i];
        if (i == index) {
            if (e.mult > 1) es.push_back({shift(e.u), shift(e.v), e.mult - 1});
            es.push_back({shift(e.u), w, 1});
            es.push_back({w, shift(e.v), 1});
        } else {
            es.push_back({shift(e.u), shift(e.v), e.mult});
        }
    }
    es.push_back({L, w, 1});
    return Multigraph(L + 1, g.internal() + 1, es);
}

struct Transition {
    Multigraph graph;
    CanonicalCode code;
    Rational prob;
};

// Exact one-step law from g, merged over isomorphic outcomes.
inline std::vector<Transition> marchal_transitions(const Multigraph& g, const Alpha& alpha) {
    const Rational a = alpha.rational();
    const auto deg = g.degrees();
    std::map<CanonicalCode, Transition> out;
    auto add = [&](Multigraph h, const Rational& w) {
        if (w == 0) return;
        auto code = canonical_code(h);
        auto it = out.find(code);
        if (it == out.end())
            out.emplace(code, Transition{std::move(h), code, w});
        else
            it->second.prob += w;
    };
    Rational total = 0;
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        const Rational w = (a - 1) * g.edges()[i].mult;
        total += w;
        add(split_edge(g, i), w);
    }
    for (int v = g.leaves(); v < g.vertex_count(); ++v) {
        const Rational w = Rational(deg[v] - 1) - a;
        total += w;
        add(attach_leaf(g, v), w);
    }
    std::vector<Transition> res;
    for (auto& [c, t] : out) {
        t.prob /= total;
        res.push_back(std::move(t));
    }
    return res;
}

// Remove the root leaf and its edge, then contract the resulting degree-2 vertex.
inline Multigraph erase_root(const Multigraph& g) {
    if (g.surplus() < 2) throw std::domain_error("erase_root: surplus must be at least 2");
    if (g.leaves() != 1) throw std::domain_error("erase_root: needs a planted kernel (n = 0)");
    int v = -1;
    std::vector<Edge> rest;
    for (const auto& e : g.edges()) {
        if (e.u == 0 || e.v == 0)
            v = (e.u == 0) ? e.v : e.u;
        else
            rest.push_back(e);
    }
    int deg_v = 0;
    for (const auto& e : rest) deg_v += (e.u == v ? e.mult : 0) + (e.v == v ? e.mult : 0);
    std::vector<int> nbrs;
    std::vector<Edge> kept;
    if (deg_v == 2) {
        for (const auto& e : rest) {
            if (e.u == v && e.v == v) throw std::logic_error("erase_root: isolated loop");
            if (e.u == v || e.v == v)
                for (int k = 0; k < e.mult; ++k) nbrs.push_back(e.u == v ? e.v : e.u);
            else
                kept.push_back(e);
        }
        kept.push_back({nbrs[0], nbrs[1], 1});
    } else {
        kept = rest;
    }
    // renumber remaining internal vertices 0..k-1
    std::vector<int> id(g.vertex_count(), -1);
    int next = 0;
    for (int x = 1; x < g.vertex_count(); ++x)
        if (!(deg_v == 2 && x == v)) id[x] = next++;
    std::vector<Edge> es;
    for (const auto& e : kept) es.push_back({id[e.u], id[e.v], e.mult});
    return Multigraph(0, next, es);
}

// Pairwise leaf distances (in edges) divided by n^{1-1/alpha}.
inline std::vector<std::vector<double>> rescaled_leaf_metric(const Multigraph& g, int n, const Alpha& alpha) {
    GrowthGraph gg(g);
    const double scale = std::pow(static_cast<double>(n), 1.0 - 1.0 / alpha.value);
    const int L = g.leaves();
    std::vector<std::vector<double>> m(L, std::vector<double>(L, 0.0));
    for (int i = 0; i < L; ++i) {
        const auto d = gg.bfs(i);
        for (int j = 0; j < L; ++j) m[i][j] = d[j] / scale;
    }
    return m;
}

// ---- ordered-tree variant ----

// Marchal step on a planted ordered tree: edges weigh alpha-1, an internal
// vertex of degree d weighs d-1-alpha. A vertex pick inserts the new leaf in a
// uniform corner; an edge pick puts it left or right of the lower part.
inline void marchal_tree_step_inplace(PlaneTree& t, const Alpha& alpha, RandomStream& rng) {
    int leaves = 0;
    for (const auto& nd : t.nodes) leaves += nd.kind == NodeKind::leaf;
    const int new_label = leaves + 1;
    const int N = static_cast<int>(t.nodes.size());
    // choose
    int chosen = -1;
    bool on_edge = false;
    if (alpha.exact) {
        const std::int64_t P = alpha.p, Q = alpha.q;
        std::int64_t total = 0;
        for (int v = 1; v < N; ++v) {
            total += P - Q;
            if (t.is_internal(v)) total += Q * (t.degree(v) - 1) - P;
        }
        auto r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
        for (int v = 1; v < N && chosen < 0; ++v) {
            if (r < P - Q) {
                chosen = v;
                on_edge = true;
                break;
            }
            r -= P - Q;
            if (t.is_internal(v)) {
                const std::int64_t w = Q * (t.degree(v) - 1) - P;
                if (r < w) {
                    chosen = v;
                    on_edge = false;
                    break;
                }
                r -= w;
            }
        }
    } else {
        const double a = alpha.value;
        double total = 0;
        for (int v = 1; v < N; ++v) total += (a - 1) + (t.is_internal(v) ? t.degree(v) - 1 - a : 0.0);
        double r = rng.uniform() * total;
        for (int v = 1; v < N; ++v) {
            chosen = v;
            if (r < a - 1) {
                on_edge = true;
                break;
            }
            r -= a - 1;
            if (t.is_internal(v)) {
                const double w = t.degree(v) - 1 - a;
                if (r < w) {
                    on_edge = false;
                    break;
                }
                r -= w;
            }
            on_edge = true;
        }
    }
    if (on_edge) {
        const int c = chosen;
        const int p = t.nodes[c].parent;
        const int w = t.add(NodeKind::internal, 0, p);
        const int leaf = t.add(NodeKind::leaf, new_label, w);
        auto& pc = t.nodes[p].children;
        *std::find(pc.begin(), pc.end(), c) = w;
        t.nodes[c].parent = w;
        if (rng.below(2) == 0)
            t.nodes[w].children = {c, leaf};
        else
            t.nodes[w].children = {leaf, c};
    } else {
        const int v = chosen;
        const int leaf = t.add(NodeKind::leaf, new_label, v);
        auto& ch = t.nodes[v].children;
        const auto pos = rng.below(ch.size() + 1);
        ch.insert(ch.begin() + static_cast<std::ptrdiff_t>(pos), leaf);
    }
}

inline PlaneTree marchal_tree_step(PlaneTree t, const Alpha& alpha, RandomStream& rng) {
    marchal_tree_step_inplace(t, alpha, rng);
    return t;
}

// Exact law of the ordered tree after growing to n labelled leaves:
// P(T) proportional to prod_{v internal} w_{deg v - 1} / (deg v - 1)!.
inline std::map<std::vector<int>, Rational> ordered_tree_distribution(int n, const Alpha& alpha) {
    const Rational a = alpha.rational();
    std::map<std::vector<int>, Rational> out;
    Rational total = 0;
    for (const auto& t : ordered_trees(0, n)) {
        Rational w = 1;
        for (int v = 0; v < static_cast<int>(t.nodes.size()); ++v) {
            if (!t.is_internal(v)) continue;
            const int d = t.degree(v);
            Rational f = 1;
            for (int k = 2; k < d; ++k) f *= k;
            w *= marchal_weight<Rational>(d - 1, a) / f;
        }
        out[t.code()] += w;
        total += w;
    }
    for (auto& [c, p] : out) p /= total;
    return out;
}

// Fast s = 0 growth returning the root-to-leaf-1 distance (in edges) after reaching n leaves.
inline int marchal_tree_root_leaf_distance(int n, const Alpha& alpha, RandomStream& rng) {
    MarchalState st = MarchalState::from(shapes::single_edge(), alpha);
    while (st.n < n) marchal_step_inplace(st, rng);
    const auto d = st.graph.bfs(st.graph.leaf_vertex(0));
    return d[st.graph.leaf_vertex(1)];
}

}  // namespace stablegraph
