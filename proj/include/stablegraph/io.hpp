#pragma once

#include "continuum.hpp"
#include "multigraph.hpp"
#include "rational.hpp"
#include "weights.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace stablegraph {

using json = nlohmann::ordered_json;

inline std::string vertex_id(const Multigraph& g, int v) {
    return g.is_leaf(v) ? "L" + std::to_string(v) : "I" + std::to_string(v - g.leaves());
}

inline int parse_vertex_id(const std::string& id, int leaves) {
    if (id.size() < 2 || (id[0] != 'L' && id[0] != 'I')) throw std::invalid_argument("bad vertex id: " + id);
    const int k = std::stoi(id.substr(1));
    return id[0] == 'L' ? k : leaves + k;
}

inline json to_json(const Multigraph& g) {
    json es = json::array();
    for (const auto& e : g.edges()) es.push_back({{"u", vertex_id(g, e.u)}, {"v", vertex_id(g, e.v)}, {"mult", e.mult}});
    return {{"surplus", g.surplus()}, {"leaves", g.leaves()}, {"internal", g.internal()}, {"edges", es}};
}

inline Multigraph graph_from_json(const json& j) {
    const int L = j.at("leaves").get<int>(), I = j.at("internal").get<int>();
    std::vector<Edge> es;
    for (const auto& e : j.at("edges"))
        es.push_back({parse_vertex_id(e.at("u"), L), parse_vertex_id(e.at("v"), L), e.value("mult", 1)});
    Multigraph g(L, I, es);
    if (j.contains("surplus") && j.at("surplus").get<int>() != g.surplus())
        throw std::invalid_argument("graph json: surplus does not match edges");
    return g;
}

inline json rational_json(const Rational& r) { return to_string(r); }

inline json to_json(const LengthedGraph& h) {
    std::vector<std::string> id(h.vertex_count());
    int internal = 0, leaves = 0;
    for (int v = 0; v < h.vertex_count(); ++v) {
        if (h.label[v] >= 0) {
            id[v] = "L" + std::to_string(h.label[v]);
            ++leaves;
        } else {
            id[v] = "I" + std::to_string(internal++);
        }
    }
    json es = json::array(), eta = json::object();
    for (const auto& e : h.edges) es.push_back({{"u", id[e.u]}, {"v", id[e.v]}, {"mult", 1}, {"len", e.len}});
    for (int v = 0; v < h.vertex_count(); ++v)
        if (h.eta[v] != 0) eta[id[v]] = h.eta[v];
    json j{{"surplus", h.surplus()}, {"leaves", leaves}, {"internal", internal}, {"edges", es}, {"eta", eta}};
    if (h.lebesgue) j["lebesgue"] = true;
    if (h.remainder > 0) j["remainder"] = h.remainder;
    return j;
}

// One row per graph, in enumeration order.
inline json distribution_json(const ExactDistribution& d, const ExactDistribution* brownian = nullptr) {
    json rows = json::array();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto& r = d.rows[i];
        json row{{"graph", to_json(r.graph)}, {"code", to_hex(r.code)}, {"sym", r.sym}, {"sl", r.sl},
                 {"mult_product", r.mult_product.str()}};
        if (d.alpha.exact) {
            row["weight_product"] = rational_json(r.weight_product);
            row["prob_num"] = boost::multiprecision::numerator(d.exact[i]).str();
            row["prob_den"] = boost::multiprecision::denominator(d.exact[i]).str();
        } else {
            row["weight_product"] = r.weight_value;
        }
        row["prob"] = d.probs[i];
        if (brownian) {
            const auto b = brownian->exact_prob(r.code);
            row["brownian_num"] = boost::multiprecision::numerator(b).str();
            row["brownian_den"] = boost::multiprecision::denominator(b).str();
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace stablegraph
