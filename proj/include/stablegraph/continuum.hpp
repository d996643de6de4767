#pragma once

#include "distributions.hpp"
#include "multigraph.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace stablegraph {

// Edge-lengthed multigraph with atoms on vertices. When `lebesgue` is set the
// measure also charges length along edges.
struct LengthedGraph {
    struct Segment {
        int u = 0;
        int v = 0;
        double len = 0;
    };

    std::vector<int> label;  // leaf label, or -1
    std::vector<double> eta;
    std::vector<Segment> edges;
    bool lebesgue = true;
    double remainder = 0;  // mass dropped by truncation

    int vertex_count() const { return static_cast<int>(label.size()); }

    int add_vertex(int lab = -1, double atom = 0) {
        label.push_back(lab);
        eta.push_back(atom);
        return vertex_count() - 1;
    }

    void add_edge(int u, int v, double len) {
        if (!(len > 0)) throw std::invalid_argument("lengthed graph: edge length must be positive");
        edges.push_back({u, v, len});
    }

    int vertex_of_label(int lab) const {
        for (int v = 0; v < vertex_count(); ++v)
            if (label[v] == lab) return v;
        throw std::out_of_range("lengthed graph: no vertex with label " + std::to_string(lab));
    }

    double total_length() const {
        double t = 0;
        for (const auto& e : edges) t += e.len;
        return t;
    }

    double atom_mass() const {
        double t = 0;
        for (double a : eta) t += a;
        return t;
    }

    double total_mass() const { return atom_mass() + (lebesgue ? total_length() : 0.0); }

    std::vector<int> degrees() const {
        std::vector<int> d(vertex_count(), 0);
        for (const auto& e : edges) {
            ++d[e.u];
            ++d[e.v];
        }
        return d;
    }

    int surplus() const { return static_cast<int>(edges.size()) - vertex_count() + 1; }

    // Forget lengths. Labelled vertices become leaves 0..L-1.
    Multigraph skeleton() const {
        int L = 0;
        for (int l : label)
            if (l >= 0) ++L;
        std::vector<int> id(vertex_count());
        int next = L;
        for (int v = 0; v < vertex_count(); ++v) {
            if (label[v] >= L) throw std::logic_error("skeleton: leaf labels are not 0..L-1");
            id[v] = label[v] >= 0 ? label[v] : next++;
        }
        std::vector<Edge> es;
        for (const auto& e : edges) es.push_back({id[e.u], id[e.v], 1});
        return Multigraph(L, next - L, es);
    }
};

// ---- metric ----

inline std::vector<double> distances_from(const LengthedGraph& g, int src) {
    const int V = g.vertex_count();
    std::vector<std::vector<std::pair<int, double>>> adj(V);
    for (const auto& e : g.edges) {
        adj[e.u].push_back({e.v, e.len});
        adj[e.v].push_back({e.u, e.len});
    }
    std::vector<double> d(V, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > d[v]) continue;
        for (auto [w, l] : adj[v])
            if (dv + l < d[w]) {
                d[w] = dv + l;
                pq.push({d[w], w});
            }
    }
    return d;
}

inline double distance(const LengthedGraph& g, int u, int v) { return distances_from(g, u)[v]; }

struct MetricSummary {
    std::vector<int> marked;                   // vertices carrying a label, by label
    std::vector<std::vector<double>> distances;
    double total_length = 0;
    double diameter_lower_bound = 0;           // max distance among marked points
};

inline MetricSummary metric_queries(const LengthedGraph& g) {
    MetricSummary m;
    std::vector<std::pair<int, int>> lv;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (g.label[v] >= 0) lv.push_back({g.label[v], v});
    std::sort(lv.begin(), lv.end());
    for (auto [l, v] : lv) m.marked.push_back(v);
    for (int a : m.marked) {
        const auto d = distances_from(g, a);
        std::vector<double> row;
        for (int b : m.marked) {
            if (!std::isfinite(d[b])) throw std::domain_error("metric_queries: graph is not connected");
            row.push_back(d[b]);
            m.diameter_lower_bound = std::max(m.diameter_lower_bound, d[b]);
        }
        m.distances.push_back(std::move(row));
    }
    m.total_length = g.total_length();
    return m;
}

// ---- the (R_n) chain ----

struct RChain {
    double alpha = 1.5;
    int s = 0;
    std::vector<double> values;  // values[n-1] = R_n

    double at(int n) const { return values.at(n - 1); }
    int size() const { return static_cast<int>(values.size()); }
};

inline MLParams r_chain_law(double alpha, int s, int n) { return {1 - 1 / alpha, (n * alpha + s - 1) / alpha}; }

// Generated backward: R_{n_max} from its ML marginal, then R_n = R_{n+1} * Beta.
inline RChain sample_r_chain(double alpha, int s, int n_max, RandomStream& rng) {
    if (!(alpha > 1 && alpha <= 2) || s < 0 || n_max < 1) throw std::domain_error("sample_r_chain: bad parameters");
    RChain c;
    c.alpha = alpha;
    c.s = s;
    c.values.assign(n_max, 0);
    c.values[n_max - 1] = sample_ml(r_chain_law(alpha, s, n_max), rng);
    for (int n = n_max - 1; n >= 1; --n) {
        const double b = sample_beta(((n + 1) * alpha + s - 2) / (alpha - 1), 1 / (alpha - 1), rng);
        c.values[n - 1] = c.values[n] * b;
    }
    return c;
}

// ---- helpers ----

// Dirichlet where zero parameters give zero coordinates (cubic vertices at alpha = 2).
inline std::vector<double> dirichlet_allow_zero(const std::vector<double>& params, RandomStream& rng) {
    std::vector<double> pos;
    for (double a : params)
        if (a > 0) pos.push_back(a);
    if (pos.empty()) throw std::invalid_argument("dirichlet: all parameters are zero");
    const auto d = sample_dirichlet(pos, rng);
    std::vector<double> out;
    std::size_t j = 0;
    for (double a : params) out.push_back(a > 0 ? d[j++] : 0.0);
    return out;
}

class KernelLaw {
public:
    KernelLaw(int s, const Alpha& alpha) : dist_(exact_distribution(s, 0, WeightSeq{alpha})) {
        double c = 0;
        for (double p : dist_.probs) cum_.push_back(c += p);
    }

    const ExactDistribution& distribution() const { return dist_; }

    const Multigraph& sample(RandomStream& rng) const {
        const double x = rng.uniform() * cum_.back();
        const auto i = std::upper_bound(cum_.begin(), cum_.end(), x) - cum_.begin();
        return dist_.rows[std::min<std::size_t>(i, cum_.size() - 1)].graph;
    }

private:
    ExactDistribution dist_;
    std::vector<double> cum_;
};

// Lengthed copy of g: leaves keep their labels, internal vertices are unlabelled,
// every edge copy gets its own entry of `lengths` in edge-list order.
inline LengthedGraph lengthed_from(const Multigraph& g, const std::vector<double>& lengths) {
    LengthedGraph h;
    for (int v = 0; v < g.vertex_count(); ++v) h.add_vertex(g.is_leaf(v) ? v : -1);
    std::size_t i = 0;
    for (const auto& e : g.edges())
        for (int c = 0; c < e.mult; ++c) h.add_edge(e.u, e.v, lengths.at(i++));
    return h;
}

// ---- line-breaking ----

// Attach a segment of length dR*B at a point drawn from eta; the atom at that
// point grows by dR*(1-B).
inline void linebreak_attach(LengthedGraph& h, double dR, int new_label, double alpha, RandomStream& rng) {
    const double atoms = h.atom_mass();
    double x = rng.uniform() * (atoms + h.total_length());
    int v = -1;
    if (x < atoms) {
        for (int w = 0; w < h.vertex_count(); ++w) {
            if (x < h.eta[w]) {
                v = w;
                break;
            }
            x -= h.eta[w];
        }
    }
    if (v < 0) {
        x = std::max(0.0, x - atoms);
        std::size_t e = 0;
        while (e + 1 < h.edges.size() && x >= h.edges[e].len) x -= h.edges[e++].len;
        auto& seg = h.edges[e];
        const double pos = std::clamp(x, 0.0, seg.len);
        if (!(pos > 0 && pos < seg.len)) return linebreak_attach(h, dR, new_label, alpha, rng);
        v = h.add_vertex();
        const int far = seg.v;
        const double rest = seg.len - pos;
        seg.v = v;
        seg.len = pos;
        h.add_edge(v, far, rest);
    }
    const double B = alpha < 2 ? sample_beta(1, (2 - alpha) / (alpha - 1), rng) : 1.0;
    const int leaf = h.add_vertex(new_label);
    h.add_edge(v, leaf, dR * B);
    h.eta[v] += dR * (1 - B);
}

class LineBreaking {
public:
    LineBreaking(int s, const Alpha& alpha) : s_(s), alpha_(alpha) {
        if (s < 0) throw std::domain_error("linebreak: s >= 0");
        if (s >= 1) kernel_ = std::make_unique<KernelLaw>(s, alpha);
    }

    int surplus() const { return s_; }
    const KernelLaw* kernel_law() const { return kernel_.get(); }

    // H_0 .. H_n (H_1 .. H_n when s = 0), all built from one chain.
    std::vector<LengthedGraph> sequence(int n, RandomStream& rng) const {
        const double a = alpha_.value;
        const int first = s_ == 0 ? 1 : 0;
        if (n < first) throw std::domain_error("linebreak: s = 0 starts from n = 1");
        const auto R = sample_r_chain(a, s_, std::max(1, n + s_), rng);
        std::vector<LengthedGraph> out;
        LengthedGraph h;
        if (s_ == 0) {
            h.add_vertex(0);
            h.add_vertex(1);
            h.add_edge(0, 1, R.at(1));
        } else {
            const Multigraph& k = kernel_->sample(rng);
            const auto deg = k.degrees();
            const int m = k.edge_count();
            std::vector<double> params(m, 1.0);
            for (int v = k.leaves(); v < k.vertex_count(); ++v) params.push_back((deg[v] - 1 - a) / (a - 1));
            const auto theta = dirichlet_allow_zero(params, rng);
            const double Rs = R.at(s_);
            std::vector<double> lengths;
            for (int i = 0; i < m; ++i) lengths.push_back(Rs * theta[i]);
            h = lengthed_from(k, lengths);
            for (int v = k.leaves(); v < k.vertex_count(); ++v) h.eta[v] = Rs * theta[m + v - k.leaves()];
        }
        out.push_back(h);
        for (int j = first; j < n; ++j) {
            linebreak_attach(h, R.at(j + s_ + 1) - R.at(j + s_), j + 1, a, rng);
            out.push_back(h);
        }
        return out;
    }

    LengthedGraph sample(int n, RandomStream& rng) const { return sequence(n, rng).back(); }

private:
    int s_;
    Alpha alpha_;
    std::unique_ptr<KernelLaw> kernel_;
};

inline LengthedGraph linebreak(int s, int n, const Alpha& alpha, RandomStream& rng) {
    return LineBreaking(s, alpha).sample(n, rng);
}

// Remove leaf `lab` and its segment; a vertex left with degree 2 and no atom is smoothed out.
inline LengthedGraph remove_leaf(LengthedGraph h, int lab, double atom_back = 0) {
    const int leaf = h.vertex_of_label(lab);
    std::size_t e = 0;
    while (e < h.edges.size() && h.edges[e].u != leaf && h.edges[e].v != leaf) ++e;
    if (e == h.edges.size()) throw std::logic_error("remove_leaf: leaf has no edge");
    const int v = h.edges[e].u == leaf ? h.edges[e].v : h.edges[e].u;
    h.eta[v] -= atom_back;
    h.edges.erase(h.edges.begin() + static_cast<std::ptrdiff_t>(e));
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < h.edges.size(); ++i)
        if (h.edges[i].u == v || h.edges[i].v == v) at.push_back(i);
    auto drop_vertex = [&](int x) {
        h.label.erase(h.label.begin() + x);
        h.eta.erase(h.eta.begin() + x);
        for (auto& s : h.edges) {
            if (s.u > x) --s.u;
            if (s.v > x) --s.v;
        }
    };
    if (at.size() == 2 && h.label[v] < 0 && h.edges[at[0]].u != h.edges[at[0]].v && std::abs(h.eta[v]) < 1e-12) {
        auto& a = h.edges[at[0]];
        const auto b = h.edges[at[1]];
        const int x = a.u == v ? a.v : a.u;
        const int y = b.u == v ? b.v : b.u;
        a = {x, y, a.len + b.len};
        h.edges.erase(h.edges.begin() + static_cast<std::ptrdiff_t>(at[1]));
        const int lo = std::max(leaf, v), hi = std::min(leaf, v);
        drop_vertex(lo);
        drop_vertex(hi);
    } else {
        drop_vertex(leaf);
    }
    return h;
}

// ---- edge-length law of a given shape ----

struct MarginalLengthLaw {
    double beta_a = 1, beta_b = 1;
    MLParams ml;
    int edges = 1;

    // E[alpha * sum L]
    double mean_total() const { return beta_a / (beta_a + beta_b) * ml_moment(ml, 1); }
};

inline MarginalLengthLaw marginal_length_law(int s, int n, double alpha, int edges) {
    MarginalLengthLaw law;
    const double c = ((n + s) * alpha + s - 1);
    law.beta_a = edges;
    law.beta_b = c / (alpha - 1) - edges;
    law.ml = {1 - 1 / alpha, c / alpha};
    law.edges = edges;
    if (!(law.beta_b > 0) && alpha < 2) throw std::domain_error("marginal lengths: Beta parameter out of range");
    return law;
}

// Lengths in edge-copy order with alpha * L = Beta * ML * Dir(1,...,1).
inline std::vector<double> marginal_lengths(int s, int n, double alpha, RandomStream& rng, const Multigraph& shape) {
    if (!validate_membership(shape, s, n)) throw std::domain_error("marginal_lengths: shape not in M_{s,n}");
    const int m = shape.edge_count();
    const auto law = marginal_length_law(s, n, alpha, m);
    const double b = law.beta_b > 0 ? sample_beta(law.beta_a, law.beta_b, rng) : 1.0;
    const double r = sample_ml(law.ml, rng);
    const auto d = sample_dirichlet(std::vector<double>(m, 1.0), rng);
    std::vector<double> out;
    for (double x : d) out.push_back(b * r * x / alpha);
    return out;
}

// ---- gluing stable trees onto the kernel ----

// Marginal of a stable tree of the given mass spanned by its root (label 0) and
// `leaves` leaves labelled 1..leaves.
inline LengthedGraph stable_tree(double alpha, int leaves, double mass, RandomStream& rng) {
    auto t = LineBreaking(0, Alpha::real(alpha)).sample(leaves, rng);
    const double scale = std::pow(mass, 1 - 1 / alpha);
    for (auto& e : t.edges) e.len *= scale;
    for (auto& a : t.eta) a *= scale;
    return t;
}

struct GlueResult {
    LengthedGraph graph;       // kernel vertices first, root has label 0
    Multigraph kernel;
    std::vector<double> masses;  // Dirichlet masses: edges, then internal vertices
    int leaf = -1;               // vertex drawn from the mass measure
    int pendant_trees = 0;
};

namespace detail {

// Splice tree t into g: t's root goes to `at`, and t's leaf 1 to `tip` when tip >= 0.
// Remaining leaves become unlabelled vertices sharing `mass`.
inline std::vector<int> splice_tree(LengthedGraph& g, const LengthedGraph& t, int at, int tip, double mass) {
    std::vector<int> id(t.vertex_count(), -1), leaves;
    int marked = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
        if (t.label[v] >= 1 && !(tip >= 0 && t.label[v] == 1)) ++marked;
    for (int v = 0; v < t.vertex_count(); ++v) {
        if (t.label[v] == 0) id[v] = at;
        else if (tip >= 0 && t.label[v] == 1) id[v] = tip;
        else {
            id[v] = g.add_vertex(-1, t.label[v] >= 1 ? mass / marked : 0.0);
            if (t.label[v] >= 1) leaves.push_back(id[v]);
        }
    }
    for (const auto& e : t.edges) g.add_edge(id[e.u], id[e.v], e.len);
    return leaves;
}

}  // namespace detail

class GlueConstruction {
public:
    GlueConstruction(int s, const Alpha& alpha) : s_(s), alpha_(alpha), kernel_(s, alpha) {
        if (s < 1) throw std::domain_error("glue construction: s >= 1");
    }

    const KernelLaw& kernel_law() const { return kernel_; }

    // Each tree is a marginal with `leaves_per_tree` mass-carrying leaves; pendant
    // collections keep their J largest trees and leave the rest as an atom.
    GlueResult sample(int leaves_per_tree, int J, RandomStream& rng) const {
        if (leaves_per_tree < 1 || J < 1) throw std::invalid_argument("glue construction: resolution must be >= 1");
        const double a = alpha_.value;
        GlueResult r;
        r.kernel = kernel_.sample(rng);
        const auto& k = r.kernel;
        r.masses = masses(k, rng);
        auto& g = r.graph;
        g.lebesgue = false;
        for (int v = 0; v < k.vertex_count(); ++v) g.add_vertex(k.is_leaf(v) ? v : -1);
        std::size_t l = 0;
        for (const auto& e : k.edges())
            for (int c = 0; c < e.mult; ++c, ++l)
                detail::splice_tree(g, stable_tree(a, leaves_per_tree + 1, r.masses[l], rng), e.u, e.v, r.masses[l]);
        const auto deg = k.degrees();
        for (int v = k.leaves(); v < k.vertex_count(); ++v) {
            const double M = r.masses[l++];
            if (!(M > 0)) continue;
            const auto pd = sample_pd(1 / a, (deg[v] - 1 - a) / a, rng, J);
            for (double w : pd.weights) {
                if (!(M * w > 0)) continue;
                detail::splice_tree(g, stable_tree(a, leaves_per_tree, M * w, rng), v, -1, M * w);
                ++r.pendant_trees;
            }
            g.eta[v] += M * pd.remainder;
            g.remainder += M * pd.remainder;
        }
        double x = rng.uniform() * g.atom_mass();
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (x < g.eta[v]) {
                r.leaf = v;
                break;
            }
            x -= g.eta[v];
        }
        if (r.leaf < 0) r.leaf = g.vertex_count() - 1;
        return r;
    }

    // Distance from the root to a point drawn from the mass measure. Only the trees
    // needed for that point are realised, so no truncation is involved.
    double root_to_uniform_leaf(RandomStream& rng) const {
        const double a = alpha_.value;
        const Multigraph& k = kernel_.sample(rng);
        const auto M = masses(k, rng);
        LengthedGraph g;
        g.lebesgue = false;
        for (int v = 0; v < k.vertex_count(); ++v) g.add_vertex(k.is_leaf(v) ? v : -1);
        const int m = k.edge_count();
        double u = rng.uniform();
        int target = -1;
        std::size_t l = 0;
        for (const auto& e : k.edges())
            for (int c = 0; c < e.mult; ++c, ++l) {
                const auto leaves = detail::splice_tree(g, stable_tree(a, 2, M[l], rng), e.u, e.v, M[l]);
                if (target < 0 && u < M[l]) target = leaves.at(0);
                if (target < 0) u -= M[l];
            }
        if (target < 0) {
            const auto deg = k.degrees();
            for (int v = k.leaves(); v < k.vertex_count() && target < 0; ++v) {
                const double Mv = M[m + v - k.leaves()];
                if (u >= Mv && v + 1 < k.vertex_count()) {
                    u -= Mv;
                    continue;
                }
                // the tree holding a mass-measure point is a size-biased pick, i.e. the first stick
                const double beta = 1 / a, theta = (deg[v] - 1 - a) / a;
                const double w = sample_beta(1 - beta, theta + beta, rng);
                target = detail::splice_tree(g, stable_tree(a, 1, Mv * w, rng), v, -1, Mv * w).at(0);
            }
        }
        return distance(g, 0, target);
    }

private:
    std::vector<double> masses(const Multigraph& k, RandomStream& rng) const {
        const double a = alpha_.value;
        const auto deg = k.degrees();
        std::vector<double> params(k.edge_count(), (a - 1) / a);
        for (int v = k.leaves(); v < k.vertex_count(); ++v) params.push_back((deg[v] - 1 - a) / a);
        return dirichlet_allow_zero(params, rng);
    }

    int s_;
    Alpha alpha_;
    KernelLaw kernel_;
};

inline GlueResult glue_construction(int s, const Alpha& alpha, int leaves_per_tree, int J, RandomStream& rng) {
    return GlueConstruction(s, alpha).sample(leaves_per_tree, J, rng);
}

}  // namespace stablegraph
