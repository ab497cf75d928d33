#include "risem/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace risem {

unsigned worker_count() {
    unsigned requested = 0;
    if (const char* env = std::getenv("RIS_EM_THREADS"); env != nullptr && *env != '\0') {
        try {
            const long v = std::stol(env);
            requested = v > 0 ? static_cast<unsigned>(v) : 0U;
        } catch (const std::exception&) {
            requested = 0;
        }
    }
    if (requested == 0) requested = std::max(1U, std::thread::hardware_concurrency());
    return requested;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  unsigned workers, std::size_t chunk) {
    if (n == 0) return;
    chunk = std::max<std::size_t>(chunk, 1);
    const std::size_t chunks = (n + chunk - 1) / chunk;
    if (workers == 0) workers = worker_count();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

    if (workers <= 1) {
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            body(begin, std::min(n, begin + chunk));
        }
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                body(c * chunk, std::min(n, (c + 1) * chunk));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace risem
