#include "ifslab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ifslab::parallel {
namespace {

unsigned initial_thread_count() {
    if (const char* env = std::getenv("IFSLAB_THREADS")) {
        try {
            long n = std::stol(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::atomic<unsigned>& configured() {
    static std::atomic<unsigned> n{initial_thread_count()};
    return n;
}

}  // namespace

unsigned thread_count() { return configured().load(); }

void set_thread_count(unsigned n) { configured().store(std::max(1u, n)); }

void for_blocks(std::size_t blocks, const std::function<void(std::size_t)>& body) {
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(thread_count(), blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) body(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (std::size_t b = next++; b < blocks; b = next++) {
            try {
                body(b);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
        run();
    }
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t leaf = 16;
    if (values.size() <= leaf) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace ifslab::parallel
