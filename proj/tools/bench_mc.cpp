// Times the serial and OpenMP Monte Carlo kernels and checks that they
// produce identical tallies.
#include <hedgelab/continuous.hpp>

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <omp.h>

using namespace hedgelab;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    long long n = argc > 1 ? std::atoll(argv[1]) : 2000000;
    long long paths = argc > 2 ? std::atoll(argv[2]) : 20000;
    const std::uint64_t seed = 12345;
    const ContinuousBlockParams params{0.5, 2.0, 2.0, 3.0};
    const std::vector<TestStrategy> strategies = {{1.0, 0.0}, {-2.0, 1.0}, {0.5, -1.5}};

    std::cout << "threads: " << omp_get_max_threads() << "\n";
    std::cout << "outcome samples: " << n << ", paths: " << paths << "\n\n";

    auto t0 = std::chrono::steady_clock::now();
    OutcomeTally serial = accumulate_outcomes_serial(params, strategies, n, seed);
    double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    OutcomeTally parallel = accumulate_outcomes_parallel(params, strategies, n, seed);
    double parallel_s = seconds_since(t0);

    bool same = serial.category_count == parallel.category_count &&
                serial.sum_f == parallel.sum_f && serial.sum_f2 == parallel.sum_f2 &&
                serial.sum_fu == parallel.sum_fu &&
                serial.sum_abs_u == parallel.sum_abs_u &&
                serial.sum_incr == parallel.sum_incr;
    std::cout << "outcome kernel  serial: " << serial_s << " s   parallel: " << parallel_s
              << " s   speedup: " << serial_s / parallel_s
              << "   identical: " << (same ? "yes" : "NO") << "\n";

    double step = default_grid_step(params);
    t0 = std::chrono::steady_clock::now();
    auto path_serial = path_terminal_counts_serial(params, step, paths, seed);
    double pserial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto path_parallel = path_terminal_counts_parallel(params, step, paths, seed);
    double pparallel_s = seconds_since(t0);

    bool psame = path_serial == path_parallel;
    std::cout << "path kernel     serial: " << pserial_s << " s   parallel: " << pparallel_s
              << " s   speedup: " << pserial_s / pparallel_s
              << "   identical: " << (psame ? "yes" : "NO") << "\n";

    return (same && psame) ? 0 : 1;
}
