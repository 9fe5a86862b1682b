#include "skt/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "skt/core_types.hpp"

namespace skt {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int threads) {
    if (threads < 1) {
        throw InvalidArgument("thread count must be at least 1");
    }
    g_threads.store(threads, std::memory_order_relaxed);
}

int thread_count() noexcept { return g_threads.load(std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
    if (workers <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        const std::size_t chunk = (n + workers - 1) / workers;
        auto run = [&](std::size_t begin, std::size_t end) {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        };
        for (std::size_t w = 1; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin < end) pool.emplace_back(run, begin, end);
        }
        run(0, std::min(n, chunk));
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace skt
