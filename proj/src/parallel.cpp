#include "ecca/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecca {

namespace {

std::size_t initial_threads() {
    if (const char* env = std::getenv("ECCA_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::atomic<std::size_t> g_threads{0};

}  // namespace

std::size_t default_threads() {
    std::size_t v = g_threads.load(std::memory_order_relaxed);
    if (v == 0) {
        v = initial_threads();
        g_threads.store(v, std::memory_order_relaxed);
    }
    return v;
}

void set_default_threads(std::size_t n) {
    g_threads.store(n == 0 ? 1 : n, std::memory_order_relaxed);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t threads) {
    if (count == 0) return;
    if (threads == 0) threads = default_threads();
    const std::size_t workers = std::min(threads, count);

    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
    body();
    for (auto& t : pool) t.join();

    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ecca
