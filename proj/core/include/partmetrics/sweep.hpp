#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "partmetrics/metrics.hpp"

namespace partmetrics {

// Label-noise degradation: exactly round(mu*N) distinct nodes, chosen
// uniformly without replacement, each moved to a different block chosen
// uniformly among the other original blocks. Canonicalized.
// Throws when mu is outside [0,1] or mu > 0 on a single-block truth.
Partition degrade(const Partition& truth, double mu, Seed seed);

// Pre-canonicalization form: labels are the truth's original block ids,
// so callers can count exactly which nodes moved.
std::vector<std::uint32_t> degrade_membership(const Partition& truth, double mu,
                                              Seed seed);

struct MetricRequest {
  MetricKind kind = MetricKind::Nmi;
  MetricConfig config;
  std::string label;  // CSV metric column value
};

struct SweepConfig {
  std::size_t n = 100;
  std::size_t k = 10;                 // near-equal truth blocks
  std::optional<Partition> truth;     // overrides n/k when set
  std::vector<double> mu_grid = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5,
                                 0.6, 0.7, 0.8, 0.9, 1.0};
  std::size_t replicates = 3;
  std::vector<MetricRequest> metrics;  // empty = nmi, ami1all, rrnmi(all)
  Seed seed;
  std::size_t mc_samples = 10000;
  unsigned threads = 0;  // 0 = worker_threads()
};

struct SweepRow {
  double mu = 0.0;
  std::size_t replicate = 0;
  std::string guess;   // degraded | singletons | one-block
  std::string metric;
  double score = 0.0;
  double std_err = 0.0;
};

// Rows in deterministic (mu, replicate, guess, metric) order regardless
// of worker count; byte-stable CSV across reruns with the same seed.
std::vector<SweepRow> run_trap_sweep(const SweepConfig& config);

// Header exactly: mu,replicate,guess,metric,score,stderr
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

// Soft diagnostic: degraded-clustering mean score per metric should be
// non-increasing in mu; violations beyond 2 stdError come back as
// warning lines (never a failure).
std::vector<std::string> monotonicity_warnings(const SweepConfig& config,
                                               const std::vector<SweepRow>& rows);

// The default metric set used when SweepConfig::metrics is empty.
std::vector<MetricRequest> default_sweep_metrics(std::size_t n,
                                                 std::size_t mc_samples,
                                                 Seed seed);

// k near-equal blocks on n elements (round-robin membership).
Partition balanced_partition(std::size_t n, std::size_t k);

}  // namespace partmetrics
