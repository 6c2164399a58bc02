#pragma once

#include <cstdint>
#include <vector>

#include "brw/env.hpp"

namespace brw::sim {

/// Particle counts over the window at one checkpoint time.
struct ParticleState {
    double time = 0.0;
    std::vector<std::int64_t> counts;  // window-indexed
    std::int64_t total = 0;
    bool aborted = false;  // population cap hit at or before this time
};

struct SimOptions {
    std::int64_t cap = 1000000;
    int start_site = 0;
    int n_checkpoints = 51;  // uniform grid on [0, t_end], used when record_times empty
    std::vector<double> record_times;
};

/// Exact continuous-time simulation by aggregated site-level event sampling:
/// the next event is an exponential race over total rate, the site is chosen
/// proportionally to count * rate, the event type by rate shares. Jumps
/// beyond the window kill the particle (matches the Dirichlet truncation of
/// the moment equations).
std::vector<ParticleState> simulate(const env::EnvironmentWindow& window,
                                    const env::EnvironmentSpec& spec, double t_end,
                                    std::uint64_t seed, const SimOptions& opts = {});

/// Integer-exact cross-replica sums; the reduction is commutative, so the
/// aggregate is identical for any thread count.
struct ReplicaAggregate {
    std::vector<double> times;
    std::vector<std::vector<std::int64_t>> sum;     // [checkpoint][site]
    std::vector<std::vector<std::int64_t>> sum_sq;  // [checkpoint][site]
    std::vector<std::int64_t> n_contributing;       // replicas not aborted by then
    std::int64_t n_replicas = 0;
    std::int64_t n_aborted = 0;
    int half_width = 0;

    double mean(std::size_t t_index, int site) const;
    double std_error(std::size_t t_index, int site) const;
};

/// OpenMP over replicas; the *_serial twin is the reference implementation
/// used by tests and the benchmark.
ReplicaAggregate run_replicas(const env::EnvironmentWindow& window,
                              const env::EnvironmentSpec& spec, std::int64_t n_replicas,
                              double t_end, std::uint64_t seed, const SimOptions& opts = {});
ReplicaAggregate run_replicas_serial(const env::EnvironmentWindow& window,
                                     const env::EnvironmentSpec& spec, std::int64_t n_replicas,
                                     double t_end, std::uint64_t seed,
                                     const SimOptions& opts = {});

/// Slope of log mean origin occupation over the trailing 30% of checkpoints.
double empirical_growth_rate(const env::EnvironmentSpec& spec,
                             const env::EnvironmentWindow& window, std::int64_t n_replicas,
                             double t_end, std::uint64_t seed, const SimOptions& opts = {});

}  // namespace brw::sim
