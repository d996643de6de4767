#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

namespace stablegraph {

enum class NodeKind : int { root = 0, internal = 1, leaf = 2, unlabelled = 3, red = 4, blue = 5 };

// Planted ordered tree. Node 0 is the root leaf; children are listed in
// clockwise order starting just after the edge towards the parent.
struct PlaneTree {
    struct Node {
        int parent = -1;
        std::vector<int> children;
        NodeKind kind = NodeKind::internal;
        int label = 0;
    };
    std::vector<Node> nodes;

    int add(NodeKind kind, int label, int parent) {
        nodes.push_back({parent, {}, kind, label});
        return static_cast<int>(nodes.size()) - 1;
    }

    int degree(int v) const { return static_cast<int>(nodes[v].children.size()) + (nodes[v].parent >= 0 ? 1 : 0); }

    bool is_internal(int v) const { return nodes[v].kind == NodeKind::internal; }

    int count(NodeKind k) const {
        int c = 0;
        for (const auto& x : nodes) c += x.kind == k;
        return c;
    }

    // Nodes in depth-first order, children visited left to right (clockwise).
    std::vector<int> preorder() const {
        std::vector<int> out;
        if (nodes.empty()) return out;
        std::vector<int> st{0};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            out.push_back(v);
            const auto& ch = nodes[v].children;
            for (auto it = ch.rbegin(); it != ch.rend(); ++it) st.push_back(*it);
        }
        return out;
    }

    // Serialization independent of node numbering.
    std::vector<int> code() const {
        std::vector<int> out;
        auto rec = [&](auto&& self, int v) -> void {
            const auto& nd = nodes[v];
            out.push_back(static_cast<int>(nd.kind));
            out.push_back(nd.label);
            out.push_back(static_cast<int>(nd.children.size()));
            for (int c : nd.children) self(self, c);
        };
        if (!nodes.empty()) rec(rec, 0);
        return out;
    }

    // Copy with nodes renumbered in preorder, dropping unreachable nodes.
    PlaneTree compact() const {
        PlaneTree t;
        std::map<int, int> id;
        for (int v : preorder()) id[v] = static_cast<int>(id.size());
        t.nodes.resize(id.size());
        for (auto [old, nw] : id) {
            t.nodes[nw].kind = nodes[old].kind;
            t.nodes[nw].label = nodes[old].label;
            t.nodes[nw].parent = nodes[old].parent >= 0 ? id.at(nodes[old].parent) : -1;
            for (int c : nodes[old].children) t.nodes[nw].children.push_back(id.at(c));
        }
        return t;
    }

    friend bool operator==(const PlaneTree& a, const PlaneTree& b) { return a.code() == b.code(); }
};

// The planted tree with one labelled leaf: root -- leaf 1.
inline PlaneTree planted_edge() {
    PlaneTree t;
    t.add(NodeKind::root, 0, -1);
    const int c = t.add(NodeKind::leaf, 1, 0);
    t.nodes[0].children.push_back(c);
    return t;
}

// All ordered shapes of a subtree with `leaves` leaves and no unary node.
// A shape is encoded as a list of child shapes; a leaf is the empty list.
struct Shape {
    std::vector<Shape> kids;
    int leaves() const {
        if (kids.empty()) return 1;
        int s = 0;
        for (const auto& k : kids) s += k.leaves();
        return s;
    }
};

inline std::vector<Shape> ordered_shapes(int leaves) {
    std::vector<Shape> out;
    if (leaves == 1) {
        out.push_back(Shape{});
    } else {
        // compositions of `leaves` into >= 2 positive parts
        std::vector<int> parts;
        auto rec = [&](auto&& self, int left) -> void {
            if (left == 0) {
                if (parts.size() < 2) return;
                std::vector<std::vector<Shape>> opts;
                for (int p : parts) opts.push_back(ordered_shapes(p));
                std::vector<Shape> cur;
                auto prod = [&](auto&& pself, std::size_t i) -> void {
                    if (i == opts.size()) {
                        out.push_back(Shape{cur});
                        return;
                    }
                    for (const auto& o : opts[i]) {
                        cur.push_back(o);
                        pself(pself, i + 1);
                        cur.pop_back();
                    }
                };
                prod(prod, 0);
                return;
            }
            for (int p = 1; p <= left; ++p) {
                if (p == leaves) continue;
                parts.push_back(p);
                self(self, left - p);
                parts.pop_back();
            }
        };
        rec(rec, leaves);
    }
    return out;
}

// Planted ordered trees with no degree-2 vertex, `unlabelled` unlabelled leaves
// and labelled leaves 1..labelled, in every arrangement.
inline std::vector<PlaneTree> ordered_trees(int unlabelled, int labelled) {
    const int L = unlabelled + labelled;
    if (L < 1) throw std::invalid_argument("ordered_trees: need at least one leaf");
    std::vector<PlaneTree> out;
    for (const auto& sh : ordered_shapes(L)) {
        // pattern: which leaf slots (in clockwise order) get labels, and which labels
        std::vector<int> pattern(L, 0);
        for (int i = 0; i < labelled; ++i) pattern[L - 1 - i] = 1;
        std::sort(pattern.begin(), pattern.end());
        do {
            std::vector<int> labels(labelled);
            for (int i = 0; i < labelled; ++i) labels[i] = i + 1;
            do {
                PlaneTree t;
                t.add(NodeKind::root, 0, -1);
                int slot = 0, li = 0;
                auto build = [&](auto&& self, const Shape& s, int parent) -> void {
                    int v;
                    if (s.kids.empty()) {
                        if (pattern[slot])
                            v = t.add(NodeKind::leaf, labels[li++], parent);
                        else
                            v = t.add(NodeKind::unlabelled, 0, parent);
                        ++slot;
                    } else {
                        v = t.add(NodeKind::internal, 0, parent);
                    }
                    t.nodes[parent].children.push_back(v);
                    for (const auto& k : s.kids) self(self, k, v);
                };
                build(build, sh, 0);
                out.push_back(std::move(t));
            } while (std::next_permutation(labels.begin(), labels.end()));
        } while (std::next_permutation(pattern.begin(), pattern.end()));
    }
    return out;
}

}  // namespace stablegraph
