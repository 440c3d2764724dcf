#include "csqar/core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace csqar {

std::size_t default_thread_count() {
    if (const char* env = std::getenv("CSQAR_THREADS")) {
        try {
            const long value = std::stol(env);
            if (value > 0) return static_cast<std::size_t>(value);
        } catch (const std::exception&) {
            // fall through to hardware concurrency
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads,
                  const std::function<void(std::size_t)>& body) {
    threads = std::min(std::max<std::size_t>(threads, 1), count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failureMutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
                return;
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
}

} // namespace csqar
