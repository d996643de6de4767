#pragma once

#include "random.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablegraph {

inline double sample_beta(double a, double b, RandomStream& rng) {
    if (!(a > 0) || !(b > 0)) throw std::invalid_argument("sample_beta: parameters must be positive");
    const double la = rng.log_gamma(a);
    const double lb = rng.log_gamma(b);
    return 1.0 / (1.0 + std::exp(lb - la));
}

inline std::vector<double> sample_dirichlet(const std::vector<double>& params, RandomStream& rng) {
    if (params.empty()) throw std::invalid_argument("sample_dirichlet: empty parameter vector");
    std::vector<double> lg(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!(params[i] > 0)) throw std::invalid_argument("sample_dirichlet: parameters must be positive");
        lg[i] = rng.log_gamma(params[i]);
    }
    const double mx = *std::max_element(lg.begin(), lg.end());
    double total = 0;
    for (auto& x : lg) total += (x = std::exp(x - mx));
    for (auto& x : lg) x /= total;
    return lg;
}

// E[prod X_i^{p_i}] for X ~ Dir(a).
inline double dirichlet_moment(const std::vector<double>& a, const std::vector<double>& p) {
    if (a.size() != p.size()) throw std::invalid_argument("dirichlet_moment: size mismatch");
    double sa = 0, sp = 0, lg = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0) || p[i] < 0) throw std::invalid_argument("dirichlet_moment: bad parameter");
        sa += a[i];
        sp += p[i];
        lg += std::lgamma(a[i] + p[i]) - std::lgamma(a[i]);
    }
    return std::exp(lg + std::lgamma(sa) - std::lgamma(sa + sp));
}

inline double beta_moment(double a, double b, double p) { return dirichlet_moment({a, b}, {p, 0.0}); }

struct PDSample {
    std::vector<double> weights;  // decreasing
    double remainder = 0;
};

// Stick-breaking with sticks Beta(1-beta, theta + i beta), first J kept.
inline PDSample sample_pd(double beta, double theta, RandomStream& rng, int J) {
    if (!(beta >= 0 && beta < 1) || !(theta > -beta)) throw std::invalid_argument("sample_pd: parameters out of range");
    if (J < 1) throw std::invalid_argument("sample_pd: truncation must be >= 1");
    PDSample out;
    out.weights.reserve(J);
    double rest = 1.0;
    for (int i = 1; i <= J; ++i) {
        const double b = sample_beta(1.0 - beta, theta + i * beta, rng);
        out.weights.push_back(rest * b);
        rest *= 1.0 - b;
    }
    std::sort(out.weights.begin(), out.weights.end(), std::greater<>());
    out.remainder = rest;
    return out;
}

// E[sum_{i1..ik distinct} prod P_{ij}^{n_j}] for PD(beta, theta), all n_j >= 1.
inline double pd_mixed_moment(double beta, double theta, const std::vector<int>& powers) {
    if (powers.empty()) throw std::invalid_argument("pd_mixed_moment: empty powers");
    const int k = static_cast<int>(powers.size());
    int n = 0;
    double lg = 0;
    for (int p : powers) {
        if (p < 1) throw std::invalid_argument("pd_mixed_moment: powers must be >= 1");
        n += p;
        lg += std::lgamma(p - beta) - std::lgamma(1 - beta);
    }
    // prod_{i=1}^{k-1} (theta + i beta)
    double pref = 1;
    for (int i = 1; i < k; ++i) pref *= theta + i * beta;
    lg += std::lgamma(theta + 1) - std::lgamma(theta + n);
    return pref * std::exp(lg);
}

struct MLParams {
    double beta = 0.5;
    double theta = 0.0;

    void check() const {
        if (!(beta > 0 && beta < 1) || !(theta > -beta))
            throw std::invalid_argument("ML parameters out of range (need 0<beta<1, theta>-beta)");
    }
};

// E[M^p] = Gamma(theta+1) Gamma(theta/beta+p+1) / (Gamma(theta/beta+1) Gamma(theta+p beta+1)).
inline double ml_moment(const MLParams& m, double p) {
    m.check();
    if (p < 0) throw std::invalid_argument("ml_moment: negative power");
    using boost::math::tgamma_ratio;
    const double b = m.beta, t = m.theta;
    return tgamma_ratio(t + 1, t + p * b + 1) * tgamma_ratio(t / b + p + 1, t / b + 1);
}

// The same moment written as Gamma(theta) Gamma(theta/beta+p) / (Gamma(theta/beta) Gamma(theta+p beta)); theta > 0.
inline double ml_moment_first_form(const MLParams& m, double p) {
    m.check();
    if (!(m.theta > 0)) throw std::domain_error("ml_moment_first_form: needs theta > 0");
    using boost::math::tgamma_ratio;
    const double b = m.beta, t = m.theta;
    return tgamma_ratio(t, t + p * b) * tgamma_ratio(t / b + p, t / b);
}

// Positive beta-stable variate with E[exp(-l S)] = exp(-l^beta) (Kanter's representation).
inline double sample_positive_stable(double beta, RandomStream& rng) {
    if (!(beta > 0 && beta < 1)) throw std::invalid_argument("sample_positive_stable: beta in (0,1)");
    const double pi = std::numbers::pi;
    const double u = rng.uniform();
    const double e = rng.exponential();
    const double a = std::pow(std::sin(beta * pi * u), beta / (1 - beta)) * std::sin((1 - beta) * pi * u) /
                     std::pow(std::sin(pi * u), 1 / (1 - beta));
    return std::pow(a / e, (1 - beta) / beta);
}

// Stable variate tilted by exp(-lambda S), for lambda^beta <= 1 by plain rejection,
// larger tilts by splitting into ceil(lambda^beta) independent pieces.
inline double sample_tilted_stable(double beta, double lambda, RandomStream& rng) {
    const double g = std::pow(lambda, beta);
    const auto m = static_cast<long>(std::max(1.0, std::ceil(g)));
    const double lp = lambda * std::pow(static_cast<double>(m), -1.0 / beta);
    double sum = 0;
    for (long i = 0; i < m; ++i) {
        while (true) {
            const double s = sample_positive_stable(beta, rng);
            if (rng.uniform() <= std::exp(-lp * s)) {
                sum += s;
                break;
            }
        }
    }
    return std::pow(static_cast<double>(m), -1.0 / beta) * sum;
}

// Number of failures before the first success in a sequence whose i-th trial
// (i = 0, 1, ...) fails with probability (x+i)/(y+i), capped at `cap`. The run
// length is drawn by inverting the gamma-ratio survival function.
inline long failure_run(double x, double y, long cap, RandomStream& rng) {
    if (cap <= 0 || x <= 0) return 0;
    const double base = std::lgamma(y) - std::lgamma(x);
    auto log_surv = [&](long j) { return std::lgamma(x + j) - std::lgamma(y + j) + base; };
    const double lu = std::log(rng.uniform());
    if (log_surv(cap) >= lu) return cap;
    // smallest j in [1, cap] with log_surv(j) < lu
    long lo = 0, hi = 1;
    while (log_surv(hi) >= lu) {
        lo = hi;
        hi = std::min(cap, 2 * hi);
    }
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (log_surv(mid) >= lu)
            lo = mid;
        else
            hi = mid;
    }
    return hi - 1;
}

// Chinese restaurant process started from one customer at one table, run to n
// customers; returns the number of tables.
inline long crp_table_count(double beta, double theta, long n, RandomStream& rng) {
    if (n < 1) throw std::invalid_argument("crp_table_count: n >= 1");
    long k = 1;
    long cur = 1;
    while (cur < n) {
        const long j = failure_run(cur - k * beta, cur + theta, n - cur, rng);
        if (j == n - cur) break;
        cur += j + 1;
        ++k;
    }
    return k;
}

// E[K_n] for the same process (K_n = number of tables after n customers).
inline double crp_mean_tables(double beta, double theta, long n) {
    using boost::math::tgamma_ratio;
    return tgamma_ratio(theta + n + beta, theta + n) * tgamma_ratio(theta + 1, theta + beta) / beta - theta / beta;
}

enum class MLMethod { tilted, crp, stable_exact };

inline MLMethod parse_ml_method(const std::string& s) {
    if (s == "tilted") return MLMethod::tilted;
    if (s == "crp") return MLMethod::crp;
    if (s == "stable-exact" || s == "stable_exact") return MLMethod::stable_exact;
    throw std::invalid_argument("unknown ML method: " + s);
}

inline double sample_ml(const MLParams& m, RandomStream& rng, MLMethod method = MLMethod::tilted, long crp_n = 1000000) {
    m.check();
    const double b = m.beta, t = m.theta;
    switch (method) {
        case MLMethod::stable_exact:
            if (t != 0) throw std::invalid_argument("stable-exact ML sampling needs theta = 0");
            return std::pow(sample_positive_stable(b, rng), -b);
        case MLMethod::crp:
            return static_cast<double>(crp_table_count(b, t, crp_n, rng)) / std::pow(static_cast<double>(crp_n), b);
        case MLMethod::tilted:
            break;
    }
    if (t < 0) return sample_ml({b, t + 1}, rng) * sample_beta(t / b + 1, 1 / b - 1, rng);
    if (t == 0) return std::pow(sample_positive_stable(b, rng), -b);
    // sigma^{-theta} tilt = mixture over lambda with lambda^beta ~ Gamma(theta/beta)
    const double lambda = std::pow(rng.gamma(t / b), 1 / b);
    return std::pow(sample_tilted_stable(b, lambda, rng), -b);
}

// Size-biased pick from Dir(a): index i with probability a_i / sum a, and the
// vector drawn from Dir(a + e_i).
struct SizeBiasedSplit {
    std::size_t index = 0;
    std::vector<double> vector;
};

inline SizeBiasedSplit size_biased_split(const std::vector<double>& a, RandomStream& rng) {
    const double total = std::accumulate(a.begin(), a.end(), 0.0);
    double u = rng.uniform() * total;
    std::size_t i = 0;
    while (i + 1 < a.size() && u >= a[i]) u -= a[i++];
    auto b = a;
    b[i] += 1;
    return {i, sample_dirichlet(b, rng)};
}

// ---- joint marginals of the stable tree on a fixed ordered shape ----

struct StableMarginalLaw {
    int edges = 1;                  // m
    std::vector<int> vertex_degrees;  // d_1..d_r
    double alpha = 1.5;
    int pd_truncation = 50;
};

struct StableMarginal {
    std::vector<double> masses;       // M(e_1..e_m), M(v_1..v_r)
    std::vector<double> local_times;  // N(e_1..e_m), N(v_1..v_r)
    std::vector<double> lengths;      // L(e_1..e_m)
    std::vector<PDSample> edge_splits;             // N(e_i, l) / N(e_i)
    std::vector<std::vector<double>> right_fractions;  // N^right(e_i,l) / N(e_i,l)
    std::vector<std::vector<double>> position_fractions;  // L(e_i,l) / L(e_i)
    std::vector<std::vector<double>> corner_splits;  // N(v_j, l) / N(v_j)
};

inline StableMarginal sample_stable_marginal(const StableMarginalLaw& law, RandomStream& rng) {
    const double a = law.alpha;
    if (!(a > 1 && a < 2)) throw std::invalid_argument("sample_stable_marginal: alpha in (1,2)");
    const int m = law.edges;
    const int r = static_cast<int>(law.vertex_degrees.size());
    std::vector<double> dp(m, 1 - 1 / a);
    std::vector<double> rth(m, 1 - 1 / a);
    for (int d : law.vertex_degrees) {
        if (d < 3) throw std::invalid_argument("sample_stable_marginal: vertex degree < 3");
        dp.push_back((d - 1 - a) / a);
        rth.push_back((d - 1 - a) / a);
    }
    StableMarginal out;
    out.masses = sample_dirichlet(dp, rng);
    for (int i = 0; i < m + r; ++i) {
        const double R = sample_ml({1 / a, rth[i]}, rng);
        out.local_times.push_back(std::pow(out.masses[i], 1 / a) * R);
        if (i < m) {
            const double Rbar = sample_ml({a - 1, a - 1}, rng);
            out.lengths.push_back(std::pow(out.masses[i], 1 - 1 / a) * std::pow(R, a - 1) * Rbar);
        }
    }
    for (int i = 0; i < m; ++i) {
        out.edge_splits.push_back(sample_pd(a - 1, a - 1, rng, law.pd_truncation));
        std::vector<double> rf, pf;
        for (int l = 0; l < law.pd_truncation; ++l) {
            rf.push_back(rng.uniform());
            pf.push_back(rng.uniform());
        }
        out.right_fractions.push_back(std::move(rf));
        out.position_fractions.push_back(std::move(pf));
    }
    for (int d : law.vertex_degrees) out.corner_splits.push_back(sample_dirichlet(std::vector<double>(d, 1.0), rng));
    return out;
}

}  // namespace stablegraph
