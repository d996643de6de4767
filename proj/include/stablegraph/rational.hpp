#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stablegraph {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rational make_rational(std::int64_t p, std::int64_t q = 1) { return Rational(BigInt(p), BigInt(q)); }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Stable index alpha in (1,2]. When it was given as P/Q the exact pair is kept,
// and every weight in the Marchal dynamics becomes an integer multiple of 1/Q.
struct Alpha {
    std::int64_t p = 3;
    std::int64_t q = 2;
    bool exact = true;
    double value = 1.5;

    static Alpha ratio(std::int64_t p, std::int64_t q) {
        if (q <= 0 || p <= 0) throw std::invalid_argument("alpha: need positive P/Q");
        const std::int64_t g = std::gcd(p, q);
        Alpha a;
        a.p = p / g;
        a.q = q / g;
        a.exact = true;
        a.value = static_cast<double>(a.p) / static_cast<double>(a.q);
        a.check();
        return a;
    }

    static Alpha real(double v) {
        Alpha a;
        a.exact = false;
        a.value = v;
        a.p = 0;
        a.q = 0;
        a.check();
        return a;
    }

    // Accepts "P/Q", an integer, or a decimal. Decimals disable exact arithmetic.
    static Alpha parse(const std::string& s, bool* was_decimal = nullptr) {
        if (was_decimal) *was_decimal = false;
        const auto slash = s.find('/');
        if (slash != std::string::npos)
            return ratio(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        if (s.find_first_of(".eE") == std::string::npos) return ratio(std::stoll(s), 1);
        if (was_decimal) *was_decimal = true;
        return real(std::stod(s));
    }

    Rational rational() const {
        if (!exact) throw std::logic_error("alpha has no exact value");
        return make_rational(p, q);
    }

    bool brownian() const { return exact ? (p == 2 * q) : value == 2.0; }

    std::string str() const {
        if (!exact) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", value);
            return buf;
        }
        return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q);
    }

private:
    void check() const {
        if (!(value > 1.0 && value <= 2.0)) throw std::invalid_argument("alpha must lie in (1,2]");
    }
};

}  // namespace stablegraph
