// Timing comparison between the OpenMP kernels and their serial reference
// implementations: spectral verdict batches and simulation replica batches.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "brw/env.hpp"
#include "brw/parallel.hpp"
#include "brw/probability.hpp"
#include "brw/sim.hpp"

namespace {

double seconds_of(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

void report(const char* name, double serial_s, double parallel_s, bool identical) {
    std::printf("%-24s serial %8.3f s   openmp %8.3f s   speedup %5.2fx   %s\n", name,
                serial_s, parallel_s, serial_s / parallel_s,
                identical ? "results identical" : "RESULTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t n_envs = 400;
    std::int64_t n_replicas = 4000;
    if (argc > 1) n_envs = std::atoll(argv[1]);
    if (argc > 2) n_replicas = std::atoll(argv[2]);

    std::printf("threads: %d (set BRW_THREADS to change)\n", brw::max_threads());
    if (!brw::has_openmp()) {
        std::printf("built without OpenMP; both columns run the serial path\n");
    }

    brw::env::EnvironmentSpec spec;
    spec.lambda_source = 0.5;
    spec.kappa = 1.0;
    spec.c = 1.0;
    spec.mu_dist = brw::env::bernoulli_mu(0.5);

    {
        std::vector<brw::spectral::Verdict> serial, parallel;
        const double ts = seconds_of([&] {
            serial = brw::prob::batch_verdicts_serial(spec, n_envs, 20250810);
        });
        const double tp = seconds_of([&] {
            parallel = brw::prob::batch_verdicts(spec, n_envs, 20250810);
        });
        report("spectral verdicts", ts, tp, serial == parallel);
    }

    {
        const auto window = brw::env::sample_environment(spec, 60, 20250810);
        brw::sim::SimOptions opts;
        brw::sim::ReplicaAggregate serial, parallel;
        const double ts = seconds_of([&] {
            serial = brw::sim::run_replicas_serial(window, spec, n_replicas, 8.0, 7, opts);
        });
        const double tp = seconds_of([&] {
            parallel = brw::sim::run_replicas(window, spec, n_replicas, 8.0, 7, opts);
        });
        const bool identical = serial.sum == parallel.sum && serial.sum_sq == parallel.sum_sq &&
                               serial.n_contributing == parallel.n_contributing &&
                               serial.n_aborted == parallel.n_aborted;
        report("simulation replicas", ts, tp, identical);
    }
    return 0;
}
