// Benchmark: OpenMP-parallel coverage sampling against the serial reference.
// Runs both paths on identical seeds, checks the reports agree exactly, and
// prints throughput for each.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <string>

#include "weylforge/verifier.hpp"
#include "weylforge/weyl_geometry.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int main(int argc, char** argv) {
    long long samples = 200000;
    std::uint64_t seed = 1;
    if (argc > 1) {
        samples = std::atoll(argv[1]);
    }
    if (argc > 2) {
        seed = static_cast<std::uint64_t>(std::atoll(argv[2]));
    }

    const int n = 3;
    const weylforge::gate_strength gamma(std::numbers::pi / 3);
    std::printf("coverage sampling benchmark: n=%d gamma=%.6f samples=%lld seed=%llu\n", n,
                gamma.gamma, samples, static_cast<unsigned long long>(seed));

    auto t0 = std::chrono::steady_clock::now();
    const auto serial = weylforge::coverage_monte_carlo_serial(n, gamma, samples, seed);
    const double ts = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const auto parallel = weylforge::coverage_monte_carlo(n, gamma, samples, seed);
    const double tp = seconds_since(t0);

    std::printf("serial:   %8.3f s  (%.0f samples/s)  violations=%lld  max_excess=%.3e\n", ts,
                samples / ts, serial.violations, serial.max_boundary_excess);
    std::printf("parallel: %8.3f s  (%.0f samples/s)  violations=%lld  max_excess=%.3e\n", tp,
                samples / tp, parallel.violations, parallel.max_boundary_excess);
    std::printf("speedup:  %.2fx\n", ts / tp);

    const bool match = serial.violations == parallel.violations &&
                       serial.samples == parallel.samples &&
                       serial.max_boundary_excess == parallel.max_boundary_excess;
    std::printf("reports match exactly: %s\n", match ? "yes" : "NO");
    return match ? 0 : 1;
}
