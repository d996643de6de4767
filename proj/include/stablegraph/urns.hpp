#pragma once

#include "distributions.hpp"
#include "random.hpp"
#include "rational.hpp"

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace stablegraph {

// ---- Polya ----

struct PolyaUrn {
    std::vector<double> weights;
    double beta = 1;
    long steps = 0;

    double total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }
};

inline std::size_t polya_pick(const PolyaUrn& u, double x) {
    double r = x * u.total();
    std::size_t i = 0;
    while (i + 1 < u.weights.size() && r >= u.weights[i]) r -= u.weights[i++];
    return i;
}

inline PolyaUrn polya_step(PolyaUrn u, RandomStream& rng) {
    if (u.weights.empty() || !(u.beta > 0)) throw std::invalid_argument("polya_step: bad urn");
    for (double w : u.weights)
        if (!(w > 0)) throw std::invalid_argument("polya_step: weights must be positive");
    u.weights[polya_pick(u, rng.uniform())] += u.beta;
    ++u.steps;
    return u;
}

// Two-colour urn with integer weights; returns colour-1 weight at each checkpoint
// (checkpoints increasing).
inline std::vector<std::int64_t> polya_two_colour(std::int64_t a1, std::int64_t a2, std::int64_t beta,
                                                  const std::vector<long>& checkpoints, RandomStream& rng) {
    if (a1 <= 0 || a2 <= 0 || beta <= 0) throw std::invalid_argument("polya_two_colour: positive integers required");
    std::int64_t w1 = a1, total = a1 + a2;
    std::vector<std::int64_t> out;
    long n = 0;
    for (long cp : checkpoints) {
        for (; n < cp; ++n) {
            if (static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total))) < w1) w1 += beta;
            total += beta;
        }
        out.push_back(w1);
    }
    return out;
}

// ---- Chinese restaurant ----

struct CRPState {
    std::vector<long> tables;  // customers per table, in order of creation
    long customers = 0;
};

// One customer, driven by a single uniform x in (0,1).
inline void crp_step_with(CRPState& st, double beta, double theta, double x) {
    const double k = static_cast<double>(st.tables.size());
    const double denom = st.customers + theta;
    double r = x * denom;
    const double fresh = theta + k * beta;
    if (r < fresh || st.tables.empty()) {
        st.tables.push_back(1);
    } else {
        r -= fresh;
        std::size_t i = 0;
        while (i + 1 < st.tables.size() && r >= st.tables[i] - beta) r -= st.tables[i++] - beta;
        ++st.tables[i];
    }
    ++st.customers;
}

inline CRPState crp_step(CRPState st, double beta, double theta, RandomStream& rng) {
    MLParams{beta, theta}.check();
    if (st.customers == 0 && !(theta > 0)) throw std::invalid_argument("crp_step: empty start needs theta > 0");
    crp_step_with(st, beta, theta, rng.uniform());
    return st;
}

// ---- triangular ----

// Red pick: red += gamma, black += beta - gamma. Black pick: black += beta.
struct TriangularUrn {
    double red = 1;
    double black = 0;
    double gamma = 1;
    double beta = 2;
    long steps = 0;

    void check() const {
        if (!(beta > gamma && gamma > 0) || !(red > 0) || black < 0)
            throw std::invalid_argument("triangular urn: need beta > gamma > 0, a > 0, b >= 0");
    }
};

inline void triangular_step_with(TriangularUrn& u, double x) {
    if (x * (u.red + u.black) < u.red) {
        u.red += u.gamma;
        u.black += u.beta - u.gamma;
    } else {
        u.black += u.beta;
    }
    ++u.steps;
}

inline TriangularUrn triangular_step(TriangularUrn u, RandomStream& rng) {
    u.check();
    triangular_step_with(u, rng.uniform());
    return u;
}

// Red weight at each checkpoint, skipping over runs of black picks in one draw.
inline std::vector<double> triangular_run(TriangularUrn u, const std::vector<long>& checkpoints, RandomStream& rng) {
    u.check();
    std::vector<double> out;
    for (long cp : checkpoints) {
        while (u.steps < cp) {
            const long left = cp - u.steps;
            const long j = failure_run(u.black / u.beta, (u.red + u.black) / u.beta, left, rng);
            u.black += j * u.beta;
            u.steps += j;
            if (j == left) break;
            u.red += u.gamma;
            u.black += u.beta - u.gamma;
            ++u.steps;
        }
        out.push_back(u.red);
    }
    return out;
}

// Limit law of R_n / n^{gamma/beta}: gamma * Beta(a/gamma, b/gamma) * ML(gamma/beta, (a+b)/beta),
// with Beta(a, 0) = 1.
inline double triangular_limit_moment(double a, double b, double gamma, double beta, double p) {
    const double bm = b > 0 ? beta_moment(a / gamma, b / gamma, p) : 1.0;
    return std::pow(gamma, p) * bm * ml_moment({gamma / beta, (a + b) / beta}, p);
}

// ---- three-type urn ----

// Colour i has types a, b, c. Picking (i,a) adds (alpha-1, 2-alpha, alpha-1) to
// colour i, (i,b) adds (0, 1, alpha-1), (i,c) adds (0, 0, alpha). Weights are
// kept as integers scaled by a common denominator.
class ThreeTypeUrn {
public:
    ThreeTypeUrn(const Alpha& alpha, const std::vector<Rational>& gamma) : alpha_(alpha) {
        if (!alpha.exact) throw std::invalid_argument("three-type urn needs rational alpha");
        if (!(alpha.value > 1 && alpha.value < 2)) throw std::invalid_argument("three-type urn: alpha in (1,2)");
        if (gamma.empty()) throw std::invalid_argument("three-type urn: no colours");
        BigInt scale = alpha.q;
        for (const auto& g : gamma) {
            if (g <= 0) throw std::invalid_argument("three-type urn: gamma must be positive");
            const BigInt d = denominator(g);
            scale = scale / boost::multiprecision::gcd(scale, d) * d;
        }
        scale_ = scale.convert_to<std::int64_t>();
        const std::int64_t P = alpha.p * (scale_ / alpha.q), S = scale_;
        add_ = {{{P - S, 2 * S - P, P - S}, {0, S, P - S}, {0, 0, P}}};
        for (const auto& g : gamma) {
            const Rational v = g * scale_;
            w_.push_back({numerator(v).convert_to<std::int64_t>(), 0, 0});
            total_ += w_.back()[0];
        }
    }

    std::size_t colours() const { return w_.size(); }
    long steps() const { return steps_; }
    std::int64_t scale() const { return scale_; }
    // Weight of colour i, type t (0 = a, 1 = b, 2 = c).
    double x(std::size_t i, int t) const { return static_cast<double>(w_[i][t]) / scale_; }
    Rational exact(std::size_t i, int t) const { return make_rational(w_[i][t], scale_); }
    Rational total() const { return make_rational(total_, scale_); }

    void step(RandomStream& rng) {
        auto r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total_)));
        for (auto& c : w_) {
            for (int t = 0; t < 3; ++t) {
                if (r < c[t]) {
                    for (int k = 0; k < 3; ++k) c[k] += add_[t][k];
                    total_ += alpha_.p * (scale_ / alpha_.q);
                    ++steps_;
                    return;
                }
                r -= c[t];
            }
        }
        throw std::logic_error("three-type urn: pick out of range");
    }

private:
    Alpha alpha_;
    std::int64_t scale_ = 1;
    std::array<std::array<std::int64_t, 3>, 3> add_{};
    std::vector<std::array<std::int64_t, 3>> w_;
    std::int64_t total_ = 0;
    long steps_ = 0;
};

inline ThreeTypeUrn three_type_step(ThreeTypeUrn u, RandomStream& rng) {
    u.step(rng);
    return u;
}

}  // namespace stablegraph
