#pragma once

#include "random.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace stablegraph {

// Worker count: STABLEGRAPH_THREADS if set, else the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("STABLEGRAPH_THREADS")) {
        const long k = std::strtol(env, nullptr, 10);
        if (k >= 1) return static_cast<unsigned>(k);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

// Task i always runs on stream `first_stream + i`, and results come back in task
// order, so output does not depend on the number of workers.
template <class F>
auto parallel_tasks(std::size_t tasks, std::uint64_t seed, std::uint64_t first_stream, F&& fn)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<RandomStream&>()))> {
    using T = decltype(fn(std::size_t{}, std::declval<RandomStream&>()));
    std::vector<T> out(tasks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, tasks)));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (std::size_t i; (i = next++) < tasks;) {
            try {
                RandomStream rng(seed, first_stream + i);
                out[i] = fn(i, rng);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (err) std::rethrow_exception(err);
    return out;
}

// Split `total` replications into chunks of at most `chunk`.
inline std::vector<std::size_t> chunk_sizes(std::size_t total, std::size_t chunk) {
    std::vector<std::size_t> out;
    for (std::size_t done = 0; done < total; done += chunk) out.push_back(std::min(chunk, total - done));
    return out;
}

}  // namespace stablegraph
