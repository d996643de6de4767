#pragma once

#include "multigraph.hpp"
#include "weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stablegraph {

struct FreqTable {
    std::map<CanonicalCode, long> counts;
    long total = 0;

    void add(const CanonicalCode& c, long k = 1) {
        counts[c] += k;
        total += k;
    }
    void add(const Multigraph& g) { add(canonical_code(g)); }

    void merge(const FreqTable& o) {
        for (const auto& [c, k] : o.counts) add(c, k);
    }

    double freq(const CanonicalCode& c) const {
        auto it = counts.find(c);
        return it == counts.end() || total == 0 ? 0.0 : static_cast<double>(it->second) / total;
    }
};

// Keys outside the exact support count fully towards the distance.
inline double tv_distance(const FreqTable& emp, const ExactDistribution& exact) {
    if (emp.total <= 0) throw std::invalid_argument("tv_distance: empty table");
    double d = 0, seen = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        const double p = emp.freq(exact.rows[i].code);
        seen += p;
        d += std::abs(p - exact.probs[i]);
    }
    d += std::max(0.0, 1.0 - seen);
    return d / 2;
}

inline double tv_distance(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: size mismatch");
    double d = 0;
    for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
    return d / 2;
}

inline double chi_square(const FreqTable& emp, const ExactDistribution& exact) {
    if (emp.total <= 0) throw std::invalid_argument("chi_square: empty table");
    double x = 0, seen = 0;
    for (std::size_t i = 0; i < exact.size(); ++i) {
        auto it = emp.counts.find(exact.rows[i].code);
        const double o = it == emp.counts.end() ? 0.0 : static_cast<double>(it->second);
        seen += o;
        const double e = exact.probs[i] * emp.total;
        if (e > 0) x += (o - e) * (o - e) / e;
        else if (o > 0) return INFINITY;
    }
    if (seen < emp.total) return INFINITY;
    return x;
}

// Asymptotic Kolmogorov critical value c(level) with P(sup > c) ~ level.
inline double ks_critical(double level) { return std::sqrt(-0.5 * std::log(level / 2)); }

struct KSResult {
    double statistic = 0;
    double threshold = 0;  // reject when statistic > threshold
    bool reject = false;
};

inline KSResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf, double level) {
    if (x.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    KSResult r;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double F = cdf(x[i]);
        r.statistic = std::max({r.statistic, (i + 1) / n - F, F - i / n});
    }
    r.threshold = ks_critical(level) / std::sqrt(n);
    r.reject = r.statistic > r.threshold;
    return r;
}

inline KSResult ks_two_sample(std::vector<double> x, std::vector<double> y, double level) {
    if (x.empty() || y.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double n = static_cast<double>(x.size()), m = static_cast<double>(y.size());
    KSResult r;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        const double t = std::min(x[i], y[j]);
        while (i < x.size() && x[i] <= t) ++i;
        while (j < y.size() && y[j] <= t) ++j;
        r.statistic = std::max(r.statistic, std::abs(i / n - j / m));
    }
    r.threshold = ks_critical(level) * std::sqrt((n + m) / (n * m));
    r.reject = r.statistic > r.threshold;
    return r;
}

struct MomentLine {
    double power = 1;
    double empirical = 0;
    double oracle = 0;
    double std_error = 0;
    double rel_error = 0;
    bool pass = false;
};

struct MomentReport {
    std::vector<MomentLine> lines;
    bool pass = true;
};

// Relative tolerance when tol > 0; otherwise |emp - oracle| <= -tol standard errors.
inline MomentReport moment_check(const std::vector<double>& sample, const std::vector<double>& oracle,
                                 const std::vector<double>& powers, double tol) {
    if (sample.empty()) throw std::invalid_argument("moment_check: empty sample");
    if (oracle.size() != powers.size()) throw std::invalid_argument("moment_check: one oracle value per power");
    MomentReport rep;
    const double n = static_cast<double>(sample.size());
    for (std::size_t k = 0; k < powers.size(); ++k) {
        MomentLine l;
        l.power = powers[k];
        double s1 = 0, s2 = 0;
        for (double x : sample) {
            const double v = std::pow(x, powers[k]);
            s1 += v;
            s2 += v * v;
        }
        l.empirical = s1 / n;
        l.std_error = std::sqrt(std::max(0.0, s2 / n - l.empirical * l.empirical) / n);
        l.oracle = oracle[k];
        l.rel_error = std::abs(l.empirical / l.oracle - 1);
        l.pass = tol > 0 ? l.rel_error <= tol : std::abs(l.empirical - l.oracle) <= -tol * l.std_error;
        rep.pass = rep.pass && l.pass;
        rep.lines.push_back(l);
    }
    return rep;
}

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

inline double std_error(const std::vector<double>& x) {
    const double m = mean(x);
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1) / static_cast<double>(x.size()));
}

}  // namespace stablegraph
