#ifndef EISLAB_COMMON_HPP
#define EISLAB_COMMON_HPP

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eislab {

using complexd = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338328;
inline constexpr double sqrt3_over_2 = 0.86602540378443864676372317075;

// Error taxonomy, mapped by the CLI onto exit codes:
//   validation_error   -> bad input (exit 2)
//   capability_error   -> outside the supported numeric range (exit 3)
//   conditioning_error -> parameters too close to a pole / zero of a normalizing factor
//   pole_error         -> evaluation exactly at a pole
//   budget_error       -> refinement budget exhausted; carries the best estimate
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct capability_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct conditioning_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Thrown by the Moebius action when the point is a preimage of infinity.
struct maps_to_cusp_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct budget_error : std::runtime_error {
    double best_value;
    double best_error;
    budget_error(const std::string& msg, double value, double error)
        : std::runtime_error(msg), best_value(value), best_error(error) {}
};

// Thread-count override for grid evaluations. Results are index-slotted and
// reduced in a fixed order, so the value is scheduling independent.
inline int thread_count() {
    const char* env = std::getenv("EISLAB_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    if (n > 64) return 64;
    return n;
}

// Apply f(i) for i in [0, n), optionally across threads. Each index writes
// only its own slot in the caller's buffers.
template <class F>
inline void for_each_index(std::size_t n, F&& f) {
    int nt = thread_count();
    if (nt <= 1 || n < 16) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (n + nt - 1) / static_cast<std::size_t>(nt);
    for (int k = 0; k < nt; ++k) {
        std::size_t lo = static_cast<std::size_t>(k) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
}

inline bool is_prime(long long n) {
    if (n < 2) return false;
    if (n < 4) return true;
    if (n % 2 == 0) return false;
    for (long long d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

}  // namespace eislab

#endif
