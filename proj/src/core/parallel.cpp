#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cvt {

int worker_count() {
    static const int n = [] {
        const char* env = std::getenv("CVTELEPORT_WORKERS");
        if (!env) return 1;
        const int v = std::atoi(env);
        if (v < 1) return 1;
        return v > 64 ? 64 : v;
    }();
    return n;
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    const int workers = worker_count();
    if (workers <= 1 || n < 64) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    const size_t chunk = std::max<size_t>(1, n / (static_cast<size_t>(workers) * 8));
    auto body = [&] {
        for (;;) {
            const size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const size_t end = std::min(n, begin + chunk);
            try {
                for (size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mtx);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers) - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(body);
    body();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cvt
