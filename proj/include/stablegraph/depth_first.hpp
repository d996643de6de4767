#pragma once

#include "multigraph.hpp"
#include "plane_tree.hpp"
#include "random.hpp"
#include "weights.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stablegraph {

// Multigraph with a cyclic (clockwise) order of half-edges around every vertex.
// Vertex ids follow Multigraph: leaves 0..L-1 by label, then internal vertices.
struct OrderedMultigraph {
    int leaves = 0;
    int internal = 0;
    std::vector<int> partner;                // half-edge -> paired half-edge
    std::vector<int> vertex;                 // half-edge -> vertex
    std::vector<std::vector<int>> rotation;  // vertex -> half-edges, clockwise

    int vertex_count() const { return leaves + internal; }
    int half_edges() const { return static_cast<int>(partner.size()); }
    int edge_count() const { return half_edges() / 2; }
    int surplus() const { return edge_count() - vertex_count() + 1; }
    int root_half_edge() const { return rotation.at(0).at(0); }

    Multigraph forget_order() const {
        std::vector<Edge> es;
        for (int h = 0; h < half_edges(); ++h)
            if (h < partner[h]) es.push_back({vertex[h], vertex[partner[h]], 1});
        return Multigraph(leaves, internal, es);
    }

    // Traversal from the root listing, per vertex, each half-edge's partner as
    // (discovery index, position counted from that vertex's entering half-edge).
    std::vector<int> code() const {
        const int V = vertex_count();
        std::vector<int> idx(V, -1), enter(V, -1), pos_in(half_edges(), 0);
        for (int v = 0; v < V; ++v)
            for (std::size_t j = 0; j < rotation[v].size(); ++j) pos_in[rotation[v][j]] = static_cast<int>(j);
        std::vector<int> order{0};
        idx[0] = 0;
        enter[0] = rotation[0][0];
        std::vector<int> out{leaves, internal};
        for (std::size_t qi = 0; qi < order.size(); ++qi) {
            const int v = order[qi];
            const auto& rot = rotation[v];
            const int d = static_cast<int>(rot.size());
            out.push_back(v < leaves ? v : -1);
            out.push_back(d);
            for (int j = 0; j < d; ++j) {
                const int h = rot[(pos_in[enter[v]] + j) % d];
                const int p = partner[h];
                const int w = vertex[p];
                if (idx[w] < 0) {
                    idx[w] = static_cast<int>(order.size());
                    order.push_back(w);
                    enter[w] = p;
                }
                const int dw = static_cast<int>(rotation[w].size());
                out.push_back(idx[w]);
                out.push_back(((pos_in[p] - pos_in[enter[w]]) % dw + dw) % dw);
            }
        }
        if (static_cast<int>(order.size()) != V) throw std::logic_error("ordered multigraph is not connected");
        return out;
    }
};

// Half-edge skeleton of g with rotations in edge-list order.
inline OrderedMultigraph to_ordered(const Multigraph& g) {
    OrderedMultigraph o;
    o.leaves = g.leaves();
    o.internal = g.internal();
    o.rotation.assign(g.vertex_count(), {});
    for (const auto& e : g.edges()) {
        for (int c = 0; c < e.mult; ++c) {
            const int a = o.half_edges(), b = a + 1;
            o.partner.push_back(b);
            o.partner.push_back(a);
            o.vertex.push_back(e.u);
            o.vertex.push_back(e.v);
            o.rotation[e.u].push_back(a);
            o.rotation[e.v].push_back(b);
        }
    }
    return o;
}

// Every assignment of cyclic orders to the internal vertices of g (with repeats
// for orders that coincide up to isomorphism).
inline std::vector<OrderedMultigraph> all_orderings(const Multigraph& g) {
    const auto base = to_ordered(g);
    std::vector<OrderedMultigraph> out;
    auto cur = base;
    auto rec = [&](auto&& self, int v) -> void {
        if (v == base.vertex_count()) {
            out.push_back(cur);
            return;
        }
        auto& rot = cur.rotation[v];
        if (rot.size() <= 2) {
            self(self, v + 1);
            return;
        }
        std::sort(rot.begin() + 1, rot.end());
        do {
            self(self, v + 1);
        } while (std::next_permutation(rot.begin() + 1, rot.end()));
    };
    rec(rec, base.leaves);
    return out;
}

// One representative per element of the ordered space, grouped by underlying graph.
struct OrderedSpace {
    std::vector<Multigraph> graphs;                            // enumerate_space order
    std::vector<std::vector<OrderedMultigraph>> fibers;        // distinct orderings per graph
    std::size_t size() const {
        std::size_t n = 0;
        for (const auto& f : fibers) n += f.size();
        return n;
    }
};

inline OrderedSpace ordered_space(int s, int n) {
    if (n < 0) throw std::domain_error("ordered_space: needs n >= 0");
    OrderedSpace sp;
    std::set<std::vector<int>> seen;
    for (const auto& g : enumerate_space(s, n)) {
        sp.graphs.push_back(g);
        sp.fibers.emplace_back();
        for (auto& o : all_orderings(g))
            if (seen.insert(o.code()).second) sp.fibers.back().push_back(std::move(o));
    }
    return sp;
}

inline Multigraph forget_order(const OrderedMultigraph& g) { return g.forget_order(); }

// ---- depth-first tree ----

// Stack exploration from the root half-edge. Returns a paired tree: internal
// nodes, labelled leaves (kind leaf), red and blue leaves labelled 1..s.
inline PlaneTree dep(const OrderedMultigraph& g) {
    if (g.leaves < 1) throw std::domain_error("dep: needs a planted graph");
    const int H = g.half_edges();
    std::vector<int> pos_in(H, 0);
    for (int v = 0; v < g.vertex_count(); ++v)
        for (std::size_t j = 0; j < g.rotation[v].size(); ++j) pos_in[g.rotation[v][j]] = static_cast<int>(j);

    PlaneTree t;
    t.add(NodeKind::root, 0, -1);
    t.nodes[0].children.assign(1, -1);
    std::vector<std::pair<int, int>> slot(H, {-1, -1});
    std::vector<char> in_stack(H, 0);
    const int h0 = g.root_half_edge();
    std::vector<int> stack{h0};
    in_stack[h0] = 1;
    slot[h0] = {0, 0};
    int s = 0;
    while (!stack.empty()) {
        const int h = stack.back();
        const int hh = g.partner[h];
        if (!in_stack[hh]) {
            stack.pop_back();
            in_stack[h] = 0;
            const int w = g.vertex[hh];
            const auto [pn, pi] = slot[h];
            const int W = w < g.leaves ? t.add(NodeKind::leaf, w, pn) : t.add(NodeKind::internal, 0, pn);
            t.nodes[pn].children[pi] = W;
            const auto& rot = g.rotation[w];
            const int d = static_cast<int>(rot.size());
            t.nodes[W].children.assign(d - 1, -1);
            for (int j = 1; j < d; ++j) slot[rot[(pos_in[hh] + j) % d]] = {W, j - 1};
            for (int j = d - 1; j >= 1; --j) {
                const int x = rot[(pos_in[hh] + j) % d];
                stack.push_back(x);
                in_stack[x] = 1;
            }
        } else {
            ++s;
            stack.pop_back();
            in_stack[h] = 0;
            stack.erase(std::find(stack.begin(), stack.end(), hh));
            in_stack[hh] = 0;
            const auto [rn, ri] = slot[h];
            const auto [bn, bi] = slot[hh];
            const int R = t.add(NodeKind::red, s, rn);
            const int B = t.add(NodeKind::blue, s, bn);
            t.nodes[rn].children[ri] = R;
            t.nodes[bn].children[bi] = B;
        }
    }
    return t;
}

// Identify red and blue leaves with equal labels; the degree-2 vertex this creates
// is contracted, so the two parent slots become the two ends of one edge.
inline OrderedMultigraph glue(const PlaneTree& t) {
    const int N = static_cast<int>(t.nodes.size());
    int L = 0, s = 0;
    for (const auto& nd : t.nodes) {
        if (nd.kind == NodeKind::root || nd.kind == NodeKind::leaf) ++L;
        if (nd.kind == NodeKind::red) s = std::max(s, nd.label);
    }
    OrderedMultigraph g;
    g.leaves = L;
    std::vector<int> vid(N, -1);
    int next = L;
    for (int v : t.preorder()) {
        const auto k = t.nodes[v].kind;
        if (k == NodeKind::root) vid[v] = 0;
        else if (k == NodeKind::leaf) vid[v] = t.nodes[v].label;
        else if (k == NodeKind::internal) vid[v] = next++;
        else if (k == NodeKind::unlabelled) throw std::invalid_argument("glue: unpaired unlabelled leaf");
    }
    g.internal = next - L;
    g.rotation.assign(next, {});
    std::vector<int> slot_he(N, -1), ent_he(N, -1);
    auto new_half = [&](int v) {
        const int h = g.half_edges();
        g.partner.push_back(-1);
        g.vertex.push_back(v);
        return h;
    };
    std::vector<int> red(s + 1, -1), blue(s + 1, -1);
    for (int v : t.preorder()) {
        const auto& nd = t.nodes[v];
        if (nd.kind == NodeKind::red) red.at(nd.label) = v;
        if (nd.kind == NodeKind::blue) blue.at(nd.label) = v;
        if (vid[v] < 0) continue;
        if (nd.parent >= 0) g.rotation[vid[v]].push_back(ent_he[v] = new_half(vid[v]));
        for (int c : nd.children) g.rotation[vid[v]].push_back(slot_he[c] = new_half(vid[v]));
    }
    for (int v = 0; v < N; ++v) {
        if (vid[v] < 0 || t.nodes[v].parent < 0) continue;
        g.partner[ent_he[v]] = slot_he[v];
        g.partner[slot_he[v]] = ent_he[v];
    }
    for (int k = 1; k <= s; ++k) {
        if (red[k] < 0 || blue[k] < 0) throw std::invalid_argument("glue: red/blue labels do not pair up");
        g.partner[slot_he[red[k]]] = slot_he[blue[k]];
        g.partner[slot_he[blue[k]]] = slot_he[red[k]];
    }
    for (int p : g.partner)
        if (p < 0) throw std::logic_error("glue: unmatched half-edge");
    return g;
}

// Erase blue leaves, contract degree-2 vertices and forget red labels.
// `origin[x]` receives, for each node x of the input, the node of the result it
// survives as (-1 if it was removed or contracted).
inline PlaneTree erase(const PlaneTree& t, std::vector<int>* origin = nullptr) {
    PlaneTree out;
    std::vector<int> org(t.nodes.size(), -1);
    auto nonblue_children = [&](int x) {
        std::vector<int> c;
        for (int y : t.nodes[x].children)
            if (t.nodes[y].kind != NodeKind::blue) c.push_back(y);
        return c;
    };
    auto build = [&](auto&& self, int x, int parent) -> void {
        while (t.nodes[x].kind == NodeKind::internal) {
            const auto c = nonblue_children(x);
            if (c.size() != 1) break;
            x = c[0];
        }
        auto kind = t.nodes[x].kind;
        int label = t.nodes[x].label;
        if (kind == NodeKind::red) {
            kind = NodeKind::unlabelled;
            label = 0;
        }
        const int X = out.add(kind, label, parent);
        if (parent >= 0) out.nodes[parent].children.push_back(X);
        org[x] = X;
        for (int c : nonblue_children(x)) self(self, c, X);
    };
    build(build, 0, -1);
    if (origin) *origin = std::move(org);
    return out;
}

// ---- gluing plans ----

struct GluingPlan {
    // (v, l) -> labels in clockwise order; only nonempty corners are stored, l is 1-based
    std::map<std::pair<int, int>, std::vector<int>> corners;
    // lower node of the edge -> blocks S_{e,1}, ..., S_{e,a_e}, block 1 deepest
    std::map<int, std::vector<std::vector<int>>> edges;

    friend bool operator==(const GluingPlan&, const GluingPlan&) = default;
};

// Unlabelled leaves of a base tree in clockwise (preorder) order.
inline std::vector<int> unlabelled_leaves(const PlaneTree& t) {
    std::vector<int> out;
    for (int v : t.preorder())
        if (t.nodes[v].kind == NodeKind::unlabelled) out.push_back(v);
    return out;
}

struct AncestralSet {
    std::set<int> edges;                     // lower endpoints
    std::set<std::pair<int, int>> corners;  // (v, l)
};

// Edges of the ancestral path of leaf u and the corners of path vertices lying to its right.
inline AncestralSet ancestral_set(const PlaneTree& t, int u) {
    AncestralSet a;
    int x = u;
    while (t.nodes[x].parent >= 0) {
        const int p = t.nodes[x].parent;
        a.edges.insert(x);
        if (t.is_internal(p)) {
            const auto& ch = t.nodes[p].children;
            const int j = static_cast<int>(std::find(ch.begin(), ch.end(), x) - ch.begin()) + 1;
            for (int l = j + 1; l <= t.degree(p); ++l) a.corners.insert({p, l});
        }
        x = p;
    }
    return a;
}

inline GluingPlan plan_of(const PlaneTree& paired) {
    std::vector<int> origin;
    const PlaneTree base = erase(paired, &origin);
    GluingPlan plan;
    // inserted vertices: walk each contracted chain from its surviving bottom node upward
    std::map<int, std::pair<int, int>> inserted;  // T' node -> (lower T node, index i)
    for (int x = 0; x < static_cast<int>(paired.nodes.size()); ++x) {
        if (origin[x] < 0 || paired.nodes[x].parent < 0) continue;
        int i = 0;
        for (int p = paired.nodes[x].parent; origin[p] < 0; p = paired.nodes[p].parent) inserted[p] = {origin[x], ++i};
    }
    for (int x : paired.preorder()) {
        const auto& nd = paired.nodes[x];
        if (nd.kind != NodeKind::blue) continue;
        const int p = nd.parent;
        if (origin[p] >= 0) {
            int l = 1;
            for (int c : paired.nodes[p].children) {
                if (c == x) break;
                if (paired.nodes[c].kind != NodeKind::blue) ++l;
            }
            plan.corners[{origin[p], l}].push_back(nd.label);
        } else {
            const auto [e, i] = inserted.at(p);
            auto& blocks = plan.edges[e];
            if (static_cast<int>(blocks.size()) < i) blocks.resize(i);
            blocks[i - 1].push_back(nd.label);
        }
    }
    return plan;
}

// Checks the four gluing-plan conditions; returns 0 when valid, else the first failing condition.
inline int plan_violation(const PlaneTree& base, const GluingPlan& plan, std::string* why = nullptr) {
    const auto red = unlabelled_leaves(base);
    const int s = static_cast<int>(red.size());
    const int N = static_cast<int>(base.nodes.size());
    auto fail = [&](int c, const std::string& msg) {
        if (why) *why = msg;
        return c;
    };
    auto perm_ok = [&](const std::vector<int>& seq) {
        std::set<int> u(seq.begin(), seq.end());
        if (u.size() != seq.size()) return false;
        for (int k : seq)
            if (k < 1 || k > s) return false;
        return true;
    };
    std::map<int, std::pair<bool, std::pair<int, int>>> where;  // label -> (is corner, (node, l or i))
    std::vector<int> seen(s + 1, 0);
    for (const auto& [key, seq] : plan.corners) {
        const auto [v, l] = key;
        if (v < 0 || v >= N || !base.is_internal(v) || l < 1 || l > base.degree(v))
            return fail(1, "corner does not exist");
        if (!perm_ok(seq)) return fail(1, "corner labels are not a permutation of a subset of 1..s");
        for (int k : seq) {
            ++seen[k];
            where[k] = {true, {v, l}};
        }
    }
    for (const auto& [e, blocks] : plan.edges) {
        if (e <= 0 || e >= N) return fail(2, "edge does not exist");
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (blocks[i].empty()) return fail(2, "empty block on an edge");
            if (!perm_ok(blocks[i])) return fail(2, "edge block is not a permutation of a subset of 1..s");
            for (int k : blocks[i]) {
                ++seen[k];
                where[k] = {false, {e, static_cast<int>(i) + 1}};
            }
        }
    }
    for (int k = 1; k <= s; ++k)
        if (seen[k] != 1) return fail(3, "label " + std::to_string(k) + " is not used exactly once");
    for (int k = 1; k <= s; ++k) {
        const auto a = ancestral_set(base, red[k - 1]);
        const auto& [is_corner, at] = where[k];
        const bool ok = is_corner ? a.corners.count(at) > 0 : a.edges.count(at.first) > 0;
        if (!ok) return fail(4, "label " + std::to_string(k) + " is not glued to the right of its ancestral path");
    }
    return 0;
}

inline PlaneTree pair_of(const PlaneTree& base, const GluingPlan& plan) {
    std::string why;
    if (const int c = plan_violation(base, plan, &why))
        throw std::invalid_argument("gluing plan violates condition " + std::to_string(c) + ": " + why);
    PlaneTree t;
    std::map<int, int> red_label;
    int r = 0;
    for (int u : unlabelled_leaves(base)) red_label[u] = ++r;
    auto blue_leaves = [&](int parent, const std::vector<int>& seq) {
        for (int k : seq) {
            const int b = t.add(NodeKind::blue, k, parent);
            t.nodes[parent].children.push_back(b);
        }
    };
    auto build = [&](auto&& self, int v, int parent) -> void {
        // inserted vertices on the edge above v, closest to the root first
        if (auto it = plan.edges.find(v); it != plan.edges.end()) {
            const auto& blocks = it->second;
            for (int i = static_cast<int>(blocks.size()); i >= 1; --i) {
                const int x = t.add(NodeKind::internal, 0, parent);
                t.nodes[parent].children.push_back(x);
                parent = x;
            }
        }
        const auto& nd = base.nodes[v];
        int X;
        if (nd.kind == NodeKind::unlabelled)
            X = t.add(NodeKind::red, red_label.at(v), parent);
        else
            X = t.add(nd.kind, nd.label, parent);
        if (parent >= 0) t.nodes[parent].children.push_back(X);
        // blue leaves of the inserted vertices go after the path child
        if (auto it = plan.edges.find(v); it != plan.edges.end()) {
            int x = parent;
            for (std::size_t i = 0; i < it->second.size(); ++i) {
                blue_leaves(x, it->second[i]);
                x = t.nodes[x].parent;
            }
        }
        const int d = base.degree(v);
        for (int l = 1; l <= static_cast<int>(nd.children.size()) + 1; ++l) {
            if (base.is_internal(v))
                if (auto it = plan.corners.find({v, l}); it != plan.corners.end()) blue_leaves(X, it->second);
            if (l <= static_cast<int>(nd.children.size())) self(self, nd.children[l - 1], X);
        }
        (void)d;
    };
    build(build, 0, -1);
    return t;
}

// Every gluing plan for a base tree.
inline std::vector<GluingPlan> all_plans(const PlaneTree& base) {
    const auto red = unlabelled_leaves(base);
    const int s = static_cast<int>(red.size());
    // candidate targets per label: corners first, then edges (encoded with l = 0)
    std::vector<std::vector<std::pair<int, int>>> targets(s + 1);
    for (int k = 1; k <= s; ++k) {
        const auto a = ancestral_set(base, red[k - 1]);
        for (const auto& c : a.corners) targets[k].push_back(c);
        for (int e : a.edges) targets[k].push_back({e, 0});
    }
    std::vector<GluingPlan> out;
    std::vector<std::pair<int, int>> choice(s + 1);
    auto expand = [&]() {
        // group labels by target
        std::map<std::pair<int, int>, std::vector<int>> groups;
        for (int k = 1; k <= s; ++k) groups[choice[k]].push_back(k);
        std::vector<std::pair<std::pair<int, int>, std::vector<int>>> gl(groups.begin(), groups.end());
        GluingPlan cur;
        auto rec = [&](auto&& self, std::size_t gi) -> void {
            if (gi == gl.size()) {
                out.push_back(cur);
                return;
            }
            auto [target, labels] = gl[gi];
            std::sort(labels.begin(), labels.end());
            const int m = static_cast<int>(labels.size());
            do {
                if (target.second > 0) {
                    cur.corners[target] = labels;
                    self(self, gi + 1);
                    cur.corners.erase(target);
                } else {
                    // cut the permutation into consecutive nonempty blocks
                    for (int mask = 0; mask < (1 << (m - 1)); ++mask) {
                        std::vector<std::vector<int>> blocks{{}};
                        for (int j = 0; j < m; ++j) {
                            blocks.back().push_back(labels[j]);
                            if (j < m - 1 && (mask >> j & 1)) blocks.emplace_back();
                        }
                        cur.edges[target.first] = blocks;
                        self(self, gi + 1);
                        cur.edges.erase(target.first);
                    }
                }
            } while (std::next_permutation(labels.begin(), labels.end()));
        };
        rec(rec, 0);
    };
    auto choose = [&](auto&& self, int k) -> void {
        if (k > s) {
            expand();
            return;
        }
        for (const auto& tg : targets[k]) {
            choice[k] = tg;
            self(self, k + 1);
        }
    };
    choose(choose, 1);
    return out;
}

// Uniformly random element of all_plans(base), for property tests on small trees.
inline GluingPlan random_plan(const PlaneTree& base, RandomStream& rng) {
    const auto plans = all_plans(base);
    return plans.at(rng.below(plans.size()));
}

// Base trees with s unlabelled and n labelled leaves.
inline std::vector<PlaneTree> base_trees(int s, int n) { return ordered_trees(s, n); }

}  // namespace stablegraph
