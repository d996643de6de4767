#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace stablegraph {

// Seeded source of randomness. Two streams with the same (seed, stream_id)
// produce identical sequences; different stream ids are seeded through seed_seq.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0) : seed_(seed), stream_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32),
                          0x5eedu};
        eng_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }

    RandomStream split(std::uint64_t child) const { return RandomStream(seed_, stream_ * 0x9e3779b97f4a7c15ULL + child + 1); }

    std::uint64_t bits() { return eng_(); }

    // Uniform on the open interval (0,1).
    double uniform() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased (Lemire's multiply-and-reject).
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t t = (0 - n) % n;
            while (low < t) {
                m = static_cast<unsigned __int128>(eng_()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double exponential() { return -std::log(uniform()); }

    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }

    double gamma(double shape) {
        if (!(shape > 0)) throw std::invalid_argument("gamma shape must be positive");
        return std::gamma_distribution<double>(shape, 1.0)(eng_);
    }

    // log of a Gamma(shape) variate; stays finite for tiny shapes.
    double log_gamma(double shape) {
        if (!(shape > 0)) throw std::invalid_argument("gamma shape must be positive");
        if (shape >= 1.0) return std::log(gamma(shape));
        return std::log(gamma(shape + 1.0)) + std::log(uniform()) / shape;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 eng_;
};

}  // namespace stablegraph
