#include "brw/sim.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "brw/parallel.hpp"
#include "brw/rng.hpp"
#include "brw/stats.hpp"

namespace brw::sim {

namespace {

constexpr std::uint64_t kSaltReplica = 0x5245504cu;

// Fenwick tree over per-site event rates: O(log n) update and
// proportional-to-weight sampling.
class RateTree {
public:
    explicit RateTree(std::size_t n) : tree_(n + 1, 0.0), weight_(n, 0.0), n_(n) {}

    void set(std::size_t i, double w) {
        const double delta = w - weight_[i];
        weight_[i] = w;
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1)) tree_[j] += delta;
    }

    double weight(std::size_t i) const { return weight_[i]; }

    double total() const {
        double s = 0.0;
        for (std::size_t j = n_; j > 0; j -= j & (~j + 1)) s += tree_[j];
        return s;
    }

    // Largest index with prefix sum <= target; target in [0, total).
    std::size_t sample(double target) const {
        std::size_t idx = 0;
        std::size_t mask = 1;
        while ((mask << 1) <= n_) mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            const std::size_t next = idx + mask;
            if (next <= n_ && tree_[next] <= target) {
                idx = next;
                target -= tree_[next];
            }
        }
        // idx is now a count of entries passed; guard fp edge cases.
        std::size_t site = idx < n_ ? idx : n_ - 1;
        while (site + 1 < n_ && weight_[site] <= 0.0) ++site;
        while (site > 0 && weight_[site] <= 0.0) --site;
        return site;
    }

private:
    std::vector<double> tree_;
    std::vector<double> weight_;
    std::size_t n_;
};

std::vector<double> checkpoint_grid(double t_end, const SimOptions& opts) {
    if (!opts.record_times.empty()) return opts.record_times;
    const int n = opts.n_checkpoints < 2 ? 2 : opts.n_checkpoints;
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        grid[static_cast<std::size_t>(i)] = t_end * static_cast<double>(i) / (n - 1);
    }
    return grid;
}

}  // namespace

std::vector<ParticleState> simulate(const env::EnvironmentWindow& window,
                                    const env::EnvironmentSpec& spec, double t_end,
                                    std::uint64_t seed, const SimOptions& opts) {
    if (opts.cap < 1) throw std::invalid_argument("simulate: cap must be >= 1");
    if (!(t_end >= 0.0)) throw std::invalid_argument("simulate: t_end must be >= 0");
    const int L = window.half_width();
    if (opts.start_site < -L || opts.start_site > L) {
        throw std::invalid_argument("simulate: start site outside window");
    }
    const auto n_sites = 2 * static_cast<std::size_t>(L) + 1;
    const auto site_index = [L](int x) { return static_cast<std::size_t>(x + L); };

    // Per-site total event rate for one particle.
    std::vector<double> site_rate(n_sites, 0.0);
    for (int x = -L; x <= L; ++x) {
        site_rate[site_index(x)] = spec.kappa + (x == 0 ? spec.lambda_source : window.mu(x));
    }

    std::vector<std::int64_t> counts(n_sites, 0);
    counts[site_index(opts.start_site)] = 1;
    std::int64_t total = 1;
    RateTree rates(n_sites);
    rates.set(site_index(opts.start_site), site_rate[site_index(opts.start_site)]);

    const std::vector<double> grid = checkpoint_grid(t_end, opts);
    std::vector<ParticleState> out;
    out.reserve(grid.size());
    std::size_t next_record = 0;
    bool aborted = false;
    double t = 0.0;
    SubStream stream(seed, kSaltReplica);

    const auto record_until = [&](double horizon) {
        while (next_record < grid.size() && grid[next_record] <= horizon) {
            ParticleState state;
            state.time = grid[next_record];
            state.counts = counts;
            state.total = total;
            state.aborted = aborted;
            out.push_back(std::move(state));
            ++next_record;
        }
    };

    while (true) {
        const double rate_total = rates.total();
        if (total == 0 || rate_total <= 0.0 || aborted) {
            record_until(t_end);
            break;
        }
        const double wait = -std::log(stream.next_u01_positive()) / rate_total;
        const double t_next = t + wait;
        record_until(std::min(t_next, t_end));
        if (t_next > t_end) break;
        t = t_next;

        const std::size_t site = rates.sample(stream.next_u01() * rate_total);
        const int x = static_cast<int>(site) - L;
        const double r = site_rate[site];
        const double u = stream.next_u01() * r;
        const auto change = [&](int y, std::int64_t delta) {
            const std::size_t j = site_index(y);
            counts[j] += delta;
            total += delta;
            rates.set(j, static_cast<double>(counts[j]) * site_rate[j]);
        };
        if (x == 0 ? (u < spec.lambda_source) : (u < window.mu(x))) {
            if (x == 0) {
                change(0, +1);  // split: one extra particle at the source
            } else {
                change(x, -1);  // killed
            }
        } else {
            // Jump, equally likely to either neighbor; outside the window the
            // particle is killed (Dirichlet truncation).
            change(x, -1);
            const int target = stream.next_u01() < 0.5 ? x - 1 : x + 1;
            if (target >= -L && target <= L) change(target, +1);
        }
        if (total > opts.cap) {
            aborted = true;
        }
    }
    return out;
}

double ReplicaAggregate::mean(std::size_t t_index, int site) const {
    const std::int64_t n = n_contributing[t_index];
    if (n == 0) return 0.0;
    return static_cast<double>(sum[t_index][static_cast<std::size_t>(site + half_width)]) /
           static_cast<double>(n);
}

double ReplicaAggregate::std_error(std::size_t t_index, int site) const {
    const std::int64_t n = n_contributing[t_index];
    if (n < 2) return 0.0;
    const auto j = static_cast<std::size_t>(site + half_width);
    const double m = mean(t_index, site);
    const double ex2 = static_cast<double>(sum_sq[t_index][j]) / static_cast<double>(n);
    const double var = std::max(0.0, ex2 - m * m) * static_cast<double>(n) /
                       static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
}

namespace {

template <bool Parallel>
ReplicaAggregate run_replicas_impl(const env::EnvironmentWindow& window,
                                   const env::EnvironmentSpec& spec, std::int64_t n_replicas,
                                   double t_end, std::uint64_t seed, const SimOptions& opts) {
    if (n_replicas < 1) throw std::invalid_argument("run_replicas: n_replicas must be >= 1");
    const std::vector<double> grid = checkpoint_grid(t_end, opts);
    const auto n_sites = 2 * static_cast<std::size_t>(window.half_width()) + 1;

    ReplicaAggregate agg;
    agg.times = grid;
    agg.half_width = window.half_width();
    agg.n_replicas = n_replicas;
    agg.sum.assign(grid.size(), std::vector<std::int64_t>(n_sites, 0));
    agg.sum_sq.assign(grid.size(), std::vector<std::int64_t>(n_sites, 0));
    agg.n_contributing.assign(grid.size(), 0);

    std::vector<char> replica_aborted(static_cast<std::size_t>(n_replicas), 0);
    // Integer sums commute, so merging replicas in any order (under a lock)
    // yields the same aggregate for every thread count.
    std::mutex merge_mutex;
    const auto body = [&](std::size_t r) {
        SimOptions local = opts;
        local.record_times = grid;
        const auto states = simulate(window, spec, t_end, derive_seed(seed, r), local);
        bool hit_cap = false;
        const std::lock_guard<std::mutex> lock(merge_mutex);
        for (std::size_t k = 0; k < states.size(); ++k) {
            if (states[k].aborted) {
                hit_cap = true;
                continue;  // beyond its abort time a replica no longer contributes
            }
            agg.n_contributing[k] += 1;
            for (std::size_t j = 0; j < n_sites; ++j) {
                const std::int64_t cnt = states[k].counts[j];
                agg.sum[k][j] += cnt;
                agg.sum_sq[k][j] += cnt * cnt;
            }
        }
        replica_aborted[r] = hit_cap ? 1 : 0;
    };
    if constexpr (Parallel) {
        parallel_for(static_cast<std::size_t>(n_replicas), body);
    } else {
        for (std::size_t r = 0; r < static_cast<std::size_t>(n_replicas); ++r) body(r);
    }
    for (char a : replica_aborted) agg.n_aborted += a;
    return agg;
}

}  // namespace

ReplicaAggregate run_replicas(const env::EnvironmentWindow& window,
                              const env::EnvironmentSpec& spec, std::int64_t n_replicas,
                              double t_end, std::uint64_t seed, const SimOptions& opts) {
    return run_replicas_impl<true>(window, spec, n_replicas, t_end, seed, opts);
}

ReplicaAggregate run_replicas_serial(const env::EnvironmentWindow& window,
                                     const env::EnvironmentSpec& spec, std::int64_t n_replicas,
                                     double t_end, std::uint64_t seed, const SimOptions& opts) {
    return run_replicas_impl<false>(window, spec, n_replicas, t_end, seed, opts);
}

double empirical_growth_rate(const env::EnvironmentSpec& spec,
                             const env::EnvironmentWindow& window, std::int64_t n_replicas,
                             double t_end, std::uint64_t seed, const SimOptions& opts) {
    const ReplicaAggregate agg = run_replicas(window, spec, n_replicas, t_end, seed, opts);
    const double t_last = agg.times.back();
    const double t_cut = t_last - 0.3 * (t_last - agg.times.front());
    std::vector<double> ts, logs;
    for (std::size_t k = 0; k < agg.times.size(); ++k) {
        if (agg.times[k] < t_cut) continue;
        const double m = agg.mean(k, 0);
        if (m > 0.0) {
            ts.push_back(agg.times[k]);
            logs.push_back(std::log(m));
        }
    }
    if (ts.size() < 2) {
        throw std::runtime_error("empirical_growth_rate: population extinct before the fit "
                                 "window");
    }
    return stats::fit_line(ts, logs).slope;
}

}  // namespace brw::sim
