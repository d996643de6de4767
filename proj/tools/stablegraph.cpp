// stablegraph: command-line front end.

#include <stablegraph/config_model.hpp>
#include <stablegraph/continuum.hpp>
#include <stablegraph/depth_first.hpp>
#include <stablegraph/distributions.hpp>
#include <stablegraph/io.hpp>
#include <stablegraph/marchal.hpp>
#include <stablegraph/parallel.hpp>
#include <stablegraph/urns.hpp>
#include <stablegraph/verify.hpp>
#include <stablegraph/weights.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace stablegraph;

namespace {

struct Common {
    std::string alpha = "3/2";
    int surplus = 0;
    int leaves = 0;
    long samples = 1;
    long steps = 0;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
    std::string method;
    int truncation = 200;
};

Alpha read_alpha(const std::string& s) {
    bool decimal = false;
    const Alpha a = Alpha::parse(s, &decimal);
    if (decimal) std::cerr << "warning: alpha " << s << " is decimal; exact rational arithmetic is disabled\n";
    if (!(a.value > 1 && a.value <= 2)) throw std::invalid_argument("alpha must lie in (1,2], got " + s);
    return a;
}

std::uint64_t need_seed(const Common& c) {
    if (!c.seed) throw std::invalid_argument("--seed is required for stochastic commands");
    return *c.seed;
}

std::vector<double> split_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    for (std::string tok; std::getline(ss, tok, ',');)
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Output sink: --out or stdout.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open " + path);
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

json header(const std::string& command, std::uint64_t seed, std::uint64_t first, std::uint64_t last, json params) {
    return {{"header", {{"command", command}, {"seed", seed}, {"streams", {first, last}}, {"params", params}}}};
}

void emit_csv_header(std::ostream& os, const json& h) { os << "# " << h.dump() << "\n"; }

int cmd_enumerate(const Common& c, bool brownian) {
    const Alpha a = read_alpha(c.alpha);
    const auto d = exact_distribution(c.surplus, c.leaves, WeightSeq{a});
    std::optional<ExactDistribution> br;
    if (brownian) br = brownian_distribution(c.surplus, c.leaves);
    Sink sink(c.out);
    auto& os = sink.os();
    const json rows = distribution_json(d, br ? &*br : nullptr);
    if (c.format == "csv") {
        os << "code,sl,weight_product,mult_product,sym,prob_num,prob_den,prob" << (brownian ? ",brownian_num,brownian_den" : "")
           << "\n";
        for (const auto& r : rows) {
            os << r["code"].get<std::string>() << ',' << r["sl"] << ',' << r["weight_product"].dump() << ','
               << r["mult_product"].get<std::string>() << ',' << r["sym"] << ',' << r.value("prob_num", "") << ','
               << r.value("prob_den", "") << ',' << fmt(r["prob"].get<double>());
            if (brownian) os << ',' << r["brownian_num"].get<std::string>() << ',' << r["brownian_den"].get<std::string>();
            os << "\n";
        }
    } else {
        os << rows.dump(2) << "\n";
    }
    return 0;
}

int cmd_marchal(const Common& c, const std::string& emit) {
    const Alpha a = read_alpha(c.alpha);
    const auto seed = need_seed(c);
    if (c.samples < 1) throw std::invalid_argument("--samples must be >= 1");
    if (c.surplus == 0 && c.leaves != 0) throw std::invalid_argument("marchal: starts from the kernel, --leaves must be 0");
    std::unique_ptr<KernelLaw> kernels;
    if (c.surplus > 0) kernels = std::make_unique<KernelLaw>(c.surplus, a);
    const auto lines = parallel_tasks(static_cast<std::size_t>(c.samples), seed, 0, [&](std::size_t i, RandomStream& rng) {
        auto st = MarchalState::from(c.surplus == 0 ? shapes::single_edge() : kernels->sample(rng), a);
        std::vector<std::string> out;
        auto line = [&](long step) {
            const auto g = st.graph.to_multigraph();
            json j{{"sample", i}, {"step", step}, {"code", to_hex(canonical_code(g))}};
            if (emit == "final") j["graph"] = to_json(g);
            out.push_back(j.dump());
        };
        for (long t = 0; t < c.steps; ++t) {
            if (emit == "trajectory") line(t);
            marchal_step_inplace(st, rng);
        }
        line(c.steps);
        return out;
    });
    Sink sink(c.out);
    auto& os = sink.os();
    os << header("marchal", seed, 0, c.samples - 1,
                 {{"surplus", c.surplus}, {"alpha", a.str()}, {"steps", c.steps}, {"samples", c.samples}, {"emit", emit}})
              .dump()
       << "\n";
    for (const auto& v : lines)
        for (const auto& l : v) os << l << "\n";
    return 0;
}

int cmd_dist(const Common& c, const std::string& law, const std::string& params, bool moments, const std::string& powers) {
    const auto p = split_doubles(params);
    auto need = [&](std::size_t k) {
        if (p.size() != k) throw std::invalid_argument("dist --law " + law + ": expected " + std::to_string(k) + " parameters");
    };
    Sink sink(c.out);
    auto& os = sink.os();
    if (moments) {
        const auto pw = split_doubles(powers);
        json rows = json::array();
        for (double q : pw) {
            double v = 0;
            if (law == "beta") need(2), v = beta_moment(p[0], p[1], q);
            else if (law == "ml") need(2), v = ml_moment({p[0], p[1]}, q);
            else if (law == "pd") need(2), v = pd_mixed_moment(p[0], p[1], {static_cast<int>(q)});
            else if (law == "dirichlet") {
                std::vector<double> e(p.size(), 0.0);
                e[0] = q;
                v = dirichlet_moment(p, e);
            } else throw std::invalid_argument("unknown law " + law);
            json r{{"power", q}, {"value", v}};
            if (law == "ml") r["first_form"] = ml_moment_first_form({p[0], p[1]}, q);
            rows.push_back(r);
        }
        os << json{{"law", law}, {"params", p}, {"moments", rows}}.dump(2) << "\n";
        return 0;
    }
    const auto seed = need_seed(c);
    const MLMethod method = c.method.empty() ? MLMethod::tilted : parse_ml_method(c.method);
    const auto chunks = chunk_sizes(static_cast<std::size_t>(c.samples), 1000);
    const auto rows = parallel_tasks(chunks.size(), seed, 0, [&](std::size_t i, RandomStream& rng) {
        std::vector<std::string> out;
        for (std::size_t k = 0; k < chunks[i]; ++k) {
            std::string line;
            if (law == "beta") need(2), line = fmt(sample_beta(p[0], p[1], rng));
            else if (law == "ml") need(2), line = fmt(sample_ml({p[0], p[1]}, rng, method));
            else if (law == "dirichlet") {
                for (double x : sample_dirichlet(p, rng)) line += (line.empty() ? "" : ",") + fmt(x);
            } else if (law == "pd") {
                need(2);
                const auto s = sample_pd(p[0], p[1], rng, c.truncation);
                line = fmt(s.remainder);
                for (double x : s.weights) line += "," + fmt(x);
            } else throw std::invalid_argument("unknown law " + law);
            out.push_back(line);
        }
        return out;
    });
    emit_csv_header(os, header("dist", seed, 0, chunks.size() - 1,
                               {{"law", law}, {"params", p}, {"samples", c.samples}, {"truncation", c.truncation}}));
    if (law == "pd") os << "remainder,weights...\n";
    else if (law == "dirichlet") os << "x1,...\n";
    else os << "x\n";
    for (const auto& v : rows)
        for (const auto& l : v) os << l << "\n";
    return 0;
}

int cmd_urn(const Common& c, const std::string& scheme, const std::string& params, long reps) {
    const auto seed = need_seed(c);
    const auto p = split_doubles(params);
    const long n = c.steps;
    if (n < 1 || reps < 1) throw std::invalid_argument("urn: --steps and --reps must be >= 1");
    std::string cols;
    std::function<std::string(RandomStream&)> run;
    if (scheme == "polya") {
        if (p.size() != 3) throw std::invalid_argument("polya params: a1,a2,beta (integers)");
        cols = "share";
        run = [&](RandomStream& rng) {
            const auto w = polya_two_colour(std::llround(p[0]), std::llround(p[1]), std::llround(p[2]), {n}, rng);
            return fmt(static_cast<double>(w[0]) / (p[0] + p[1] + p[2] * n));
        };
    } else if (scheme == "crp") {
        if (p.size() != 2) throw std::invalid_argument("crp params: beta,theta");
        cols = "tables_scaled";
        run = [&](RandomStream& rng) { return fmt(crp_table_count(p[0], p[1], n, rng) / std::pow(double(n), p[0])); };
    } else if (scheme == "triangular") {
        if (p.size() != 4) throw std::invalid_argument("triangular params: a,b,gamma,beta");
        cols = "red_scaled";
        run = [&](RandomStream& rng) {
            const auto r = triangular_run({p[0], p[1], p[2], p[3]}, {n}, rng);
            return fmt(r[0] / std::pow(double(n), p[2] / p[3]));
        };
    } else if (scheme == "threetype") {
        if (p.empty()) throw std::invalid_argument("threetype params: gamma_1,...,gamma_k");
        const Alpha a = read_alpha(c.alpha);
        std::vector<Rational> gamma;
        for (const auto& tok : [&] {
                 std::vector<std::string> t;
                 std::stringstream ss(params);
                 for (std::string x; std::getline(ss, x, ',');) t.push_back(x);
                 return t;
             }()) {
            const auto slash = tok.find('/');
            if (tok.find_first_of(".eE") != std::string::npos)
                throw std::invalid_argument("threetype gamma must be rational: " + tok);
            gamma.push_back(slash == std::string::npos
                                ? make_rational(std::stoll(tok), 1)
                                : make_rational(std::stoll(tok.substr(0, slash)), std::stoll(tok.substr(slash + 1))));
        }
        for (std::size_t i = 0; i < gamma.size(); ++i) cols += (i ? "," : "") + std::string("share_c") + std::to_string(i + 1);
        run = [&, a, gamma](RandomStream& rng) {
            ThreeTypeUrn u(a, gamma);
            while (u.steps() < n) u.step(rng);
            double tot = 0;
            for (std::size_t i = 0; i < u.colours(); ++i) tot += u.x(i, 2);
            std::string line;
            for (std::size_t i = 0; i < u.colours(); ++i) line += (i ? "," : "") + fmt(u.x(i, 2) / tot);
            return line;
        };
    } else {
        throw std::invalid_argument("unknown urn scheme " + scheme);
    }
    const auto rows = parallel_tasks(static_cast<std::size_t>(reps), seed, 0, [&](std::size_t, RandomStream& rng) { return run(rng); });
    Sink sink(c.out);
    auto& os = sink.os();
    emit_csv_header(os, header("urn", seed, 0, reps - 1, {{"scheme", scheme}, {"params", params}, {"steps", n}, {"reps", reps}}));
    os << cols << "\n";
    for (const auto& l : rows) os << l << "\n";
    return 0;
}

int cmd_cm(const Common& c, int m, const std::string& condition, std::int64_t budget) {
    const Alpha a = read_alpha(c.alpha);
    const auto seed = need_seed(c);
    const DegreeLaw law(a);
    Sink sink(c.out);
    auto& os = sink.os();
    if (condition.empty()) {
        const auto lines = parallel_tasks(static_cast<std::size_t>(c.samples), seed, 0, [&](std::size_t i, RandomStream& rng) {
            const auto p = sample_configuration(law, m, rng);
            json comps = json::array();
            for (const auto& k : p.components()) comps.push_back({{"vertices", k.vertices.size()}, {"surplus", k.surplus()}});
            return json{{"sample", i}, {"degrees", p.degrees}, {"components", comps}, {"graph", to_json(p.to_multigraph(0))}}
                .dump();
        });
        os << header("cm", seed, 0, c.samples - 1, {{"alpha", a.str()}, {"vertices", m}, {"samples", c.samples}}).dump() << "\n";
        for (const auto& l : lines) os << l << "\n";
        return 0;
    }
    const auto sn = split_doubles(condition);
    if (sn.size() != 2) throw std::invalid_argument("--condition expects s,n");
    const int s = static_cast<int>(sn[0]), n = static_cast<int>(sn[1]);
    FreqTable f;
    std::int64_t attempts = 0;
    std::uint64_t stream = 0;
    const std::int64_t chunk = 1000000;
    while (f.total < c.samples) {
        if (attempts >= budget)
            throw std::runtime_error("cm: budget of " + std::to_string(budget) + " attempts exhausted with " +
                                     std::to_string(f.total) + " acceptances");
        const auto rs = parallel_tasks(worker_count(), seed, stream, [&](std::size_t, RandomStream& rng) {
            return sample_conditioned_batch(s, n, m, law, chunk, rng);
        });
        stream += rs.size();
        for (const auto& r : rs) {
            attempts += r.attempts;
            for (const auto& g : r.graphs) f.add(g);
        }
    }
    json table = json::array();
    for (const auto& [code, k] : f.counts)
        table.push_back({{"code", to_hex(code)}, {"count", k}, {"freq", static_cast<double>(k) / f.total}});
    json out = header("cm", seed, 0, stream - 1,
                      {{"alpha", a.str()}, {"vertices", m}, {"condition", {s, n}}, {"min_acceptances", c.samples}});
    out["attempts"] = attempts;
    out["acceptances"] = f.total;
    out["table"] = table;
    if (a.exact) {
        const auto exact = restrict_vertex_count(exact_distribution(s, n, WeightSeq{a}), m);
        out["tv_vs_exact"] = tv_distance(f, exact);
    }
    os << out.dump(2) << "\n";
    return 0;
}

int cmd_bijection(const Common& c, const std::string& check) {
    const auto sp = ordered_space(c.surplus, c.leaves);
    json report{{"check", check}, {"surplus", c.surplus}, {"leaves", c.leaves}};
    long checked = 0;
    std::optional<json> bad;
    auto ordered_json = [](const OrderedMultigraph& g) {
        return json{{"leaves", g.leaves}, {"internal", g.internal}, {"partner", g.partner}, {"vertex", g.vertex},
                    {"rotation", g.rotation}};
    };
    if (check == "roundtrip") {
        for (const auto& fiber : sp.fibers)
            for (const auto& g : fiber) {
                ++checked;
                if (!bad && glue(dep(g)).code() != g.code()) bad = ordered_json(g);
            }
    } else if (check == "fibers") {
        for (std::size_t i = 0; i < sp.graphs.size(); ++i) {
            ++checked;
            const BigInt want = ordering_count(sp.graphs[i]);
            if (!bad && BigInt(sp.fibers[i].size()) != want)
                bad = json{{"graph", to_json(sp.graphs[i])}, {"orderings", sp.fibers[i].size()}, {"formula", want.str()}};
        }
    } else if (check == "plans") {
        std::set<std::vector<int>> codes;
        for (const auto& base : base_trees(c.surplus, c.leaves))
            for (const auto& plan : all_plans(base)) {
                ++checked;
                const auto paired = pair_of(base, plan);
                codes.insert(glue(paired).code());
                if (!bad && !(plan_of(paired) == plan)) bad = json{{"base", base.code()}};
            }
        report["distinct_glued"] = codes.size();
        report["ordered_space"] = sp.size();
        if (!bad && codes.size() != sp.size()) bad = json{{"distinct_glued", codes.size()}, {"ordered_space", sp.size()}};
        if (!bad && static_cast<std::size_t>(checked) != sp.size()) bad = json{{"plans", checked}, {"ordered_space", sp.size()}};
    } else {
        throw std::invalid_argument("unknown check " + check);
    }
    report["checked"] = checked;
    report["pass"] = !bad;
    if (bad) report["counterexample"] = *bad;
    Sink sink(c.out);
    sink.os() << report.dump(2) << "\n";
    std::cerr << (bad ? "FAIL" : "PASS") << ": " << check << " on (" << c.surplus << "," << c.leaves << "), " << checked
              << " cases\n";
    return bad ? 1 : 0;
}

int cmd_continuum(const Common& c, const std::string& emit, int n) {
    const Alpha a = read_alpha(c.alpha);
    const auto seed = need_seed(c);
    const std::string method = c.method.empty() ? "linebreak" : c.method;
    std::unique_ptr<LineBreaking> lb;
    std::unique_ptr<GlueConstruction> gc;
    if (method == "linebreak") lb = std::make_unique<LineBreaking>(c.surplus, a);
    else if (method == "glue") gc = std::make_unique<GlueConstruction>(c.surplus, a);
    else throw std::invalid_argument("unknown continuum method " + method);
    const auto lines = parallel_tasks(static_cast<std::size_t>(c.samples), seed, 0, [&](std::size_t i, RandomStream& rng) {
        GlueResult gr;
        if (gc) gr = gc->sample(n, c.truncation, rng);
        const LengthedGraph h = lb ? lb->sample(n, rng) : gr.graph;
        json j{{"sample", i}};
        if (gc) {
            j["remainder"] = h.remainder;
            j["pendant_trees"] = gr.pendant_trees;
        }
        if (emit == "lengths") {
            std::vector<double> len;
            for (const auto& e : h.edges) len.push_back(e.len);
            j["total"] = h.total_length();
            j["lengths"] = len;
        } else if (emit == "metric") {
            const auto m = metric_queries(h);
            j["total_length"] = m.total_length;
            j["diameter_lower_bound"] = m.diameter_lower_bound;
            j["distances"] = m.distances;
            if (gc) j["root_to_sampled_leaf"] = distance(h, h.vertex_of_label(0), gr.leaf);
        } else if (emit == "graphjson") {
            j["graph"] = to_json(h);
        } else {
            throw std::invalid_argument("unknown --emit " + emit);
        }
        return j.dump();
    });
    Sink sink(c.out);
    auto& os = sink.os();
    json params{{"method", method}, {"surplus", c.surplus}, {"alpha", a.str()}, {"n", n}, {"samples", c.samples}, {"emit", emit}};
    if (gc) params["truncation"] = c.truncation;
    os << header("continuum", seed, 0, c.samples - 1, params).dump() << "\n";
    for (const auto& l : lines) os << l << "\n";
    return 0;
}

int cmd_verify(const Common& c, const std::string& suite) {
    json report{{"suite", suite}, {"criteria", json::array()}};
    bool ok = true;
    for (int id : suite_criteria(suite)) {
        const auto r = run_criterion(id);
        ok = ok && r.pass();
        report["criteria"].push_back(r.to_json());
        std::cerr << (r.pass() ? "PASS" : "FAIL") << " criterion " << id << ": " << r.title << "\n";
    }
    report["pass"] = ok;
    Sink sink(c.out);
    sink.os() << report.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stablegraph: discrete and continuum marginals of the alpha-stable graph"};
    app.require_subcommand(1);
    Common c;
    auto common = [&](CLI::App* s, bool stochastic) {
        s->add_option("--alpha", c.alpha, "alpha as P/Q (or decimal)");
        s->add_option("--surplus", c.surplus, "surplus s")->check(CLI::NonNegativeNumber);
        s->add_option("--leaves", c.leaves, "leaves n")->check(CLI::NonNegativeNumber);
        s->add_option("--out", c.out, "output file (default stdout)");
        s->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        if (stochastic) {
            s->add_option("--samples", c.samples, "number of samples")->check(CLI::PositiveNumber);
            s->add_option("--seed", c.seed, "random seed");
        }
    };

    bool brownian = false;
    auto* en = app.add_subcommand("enumerate", "exact law on M_{s,n}");
    common(en, false);
    en->add_flag("--brownian", brownian, "add the alpha=2 column");

    std::string emit_m = "final";
    auto* ma = app.add_subcommand("marchal", "Marchal growth from a random kernel");
    common(ma, true);
    ma->add_option("--steps", c.steps, "growth steps")->check(CLI::NonNegativeNumber);
    ma->add_option("--emit", emit_m)->check(CLI::IsMember({"final", "trajectory"}));

    std::string law, params, powers = "1,2";
    auto* di = app.add_subcommand("dist", "draws from beta, dirichlet, pd, ml");
    common(di, true);
    di->add_option("--law", law)->required()->check(CLI::IsMember({"beta", "dirichlet", "pd", "ml"}));
    di->add_option("--params", params, "comma-separated parameters")->required();
    di->add_option("--method", c.method, "ML sampler: tilted, crp, stable-exact");
    di->add_option("--truncation", c.truncation, "PD sticks kept");
    auto* dm = di->add_subcommand("moments", "formula moments instead of draws");
    dm->add_option("--powers", powers, "comma-separated powers");

    std::string scheme, uparams;
    long reps = 1;
    auto* ur = app.add_subcommand("urn", "urn schemes");
    common(ur, true);
    ur->add_option("--scheme", scheme)->required()->check(CLI::IsMember({"polya", "crp", "triangular", "threetype"}));
    ur->add_option("--params", uparams)->required();
    ur->add_option("--steps", c.steps)->required();
    ur->add_option("--reps", reps);

    int vertices = 0;
    std::string condition;
    std::int64_t budget = 2000000000;
    auto* cm = app.add_subcommand("cm", "configuration model");
    common(cm, true);
    cm->add_option("--vertices", vertices)->required()->check(CLI::PositiveNumber);
    cm->add_option("--condition", condition, "s,n");
    cm->add_option("--budget", budget, "maximum rejection attempts");

    std::string check;
    auto* bj = app.add_subcommand("bijection", "depth-first bijection checks");
    common(bj, false);
    bj->add_option("--check", check)->required()->check(CLI::IsMember({"roundtrip", "fibers", "plans"}));

    std::string emit_c = "lengths";
    int cn = 1;
    auto* co = app.add_subcommand("continuum", "continuum marginals");
    common(co, true);
    co->add_option("--method", c.method)->check(CLI::IsMember({"linebreak", "glue"}));
    co->add_option("--n", cn, "leaves (glue: leaves per tree)");
    co->add_option("--emit", emit_c)->check(CLI::IsMember({"lengths", "metric", "graphjson"}));
    co->add_option("--truncation", c.truncation, "PD trees kept per collection (glue)");

    std::string suite;
    auto* ve = app.add_subcommand("verify", "acceptance suites");
    ve->add_option("--suite", suite)
        ->required()
        ->check(CLI::IsMember({"figure2", "marchal", "configmodel", "urns", "moments", "bijection", "crossconstruction"}));
    ve->add_option("--out", c.out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*en) return cmd_enumerate(c, brownian);
        if (*ma) return cmd_marchal(c, emit_m);
        if (*di) return cmd_dist(c, law, params, static_cast<bool>(*dm), powers);
        if (*ur) return cmd_urn(c, scheme, uparams, reps);
        if (*cm) return cmd_cm(c, vertices, condition, budget);
        if (*bj) return cmd_bijection(c, check);
        if (*co) return cmd_continuum(c, emit_c, cn);
        if (*ve) return cmd_verify(c, suite);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
