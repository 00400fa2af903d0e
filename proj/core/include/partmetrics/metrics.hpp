#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "partmetrics/expectation.hpp"

namespace partmetrics {

enum class MetricKind { Nmi, Rnmi, Rrnmi, Cnmi, Ami, AmiAllOneSided };

std::string to_string(MetricKind k);
std::optional<MetricKind> metric_from_string(const std::string& s);

struct MetricConfig {
  RandomModelSpec model_spec;
  MeanParam mean_param = MeanParam::geometric();
  BoundKind bound = BoundKind::GeneralizedMean;
};

// Score plus degeneracy flags. Adjusted metrics may be negative
// (worse-than-chance); `undefined` marks denominator failures, in which
// case score is NaN. `band` is the half-width obtained by re-evaluating
// the metric at mean +- 2 stdError of each Monte Carlo expectation, so it
// is present exactly when a Monte Carlo estimator fed the score.
struct MetricResult {
  MetricKind kind = MetricKind::Nmi;
  double score = 0.0;
  std::optional<double> band;
  bool degenerate = false;
  bool undefined = false;
  std::string note;
  MetricConfig config;
};

// NMI with the configured upper-bound convention: GeneralizedMean uses
// M_p(H(X), H(Y)); LogN uses log N; SelfTruth uses H(Y) (the reference,
// second argument). Returns 0 when the bound is 0.
double bounded_nmi(const Partition& x, const Partition& y, MeanParam p,
                   BoundKind bound);

// Expectation store shared across composite metrics so that algebraic
// identities hold to floating point rather than estimator noise.
// Concurrent readers, single-writer insertion.
class ExpectationCache {
public:
  ExpectationEstimate get_or_compute(
      const std::string& key, const std::function<ExpectationEstimate()>& fn);
  std::size_t size() const;

private:
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, ExpectationEstimate> map_;
};

// Evaluates the metric family against one shared cache. Degenerate
// inputs (one-block sides, N = 1) never abort; they come back flagged.
class MetricEngine {
public:
  MetricEngine() : cache_(std::make_shared<ExpectationCache>()) {}
  explicit MetricEngine(std::shared_ptr<ExpectationCache> cache)
      : cache_(std::move(cache)) {}

  const std::shared_ptr<ExpectationCache>& cache() const { return cache_; }

  MetricResult nmi(const Partition& c, const Partition& t, MeanParam p) const;

  // NMI(C,T) - E[NMI(C',T)], C' from the configured model anchored at C.
  MetricResult rnmi(const Partition& c, const Partition& t,
                    const MetricConfig& config) const;

  // rNMI renormalized by its value at a perfect candidate, with the
  // chance expectation shared between numerator and denominator.
  MetricResult rrnmi(const Partition& c, const Partition& t,
                     const MetricConfig& config) const;

  // Mediant symmetrization. Two-sided uses the four classical rNMI terms
  // (each expectation over its own anchored ensemble); one-sided fixes
  // the truth, which collapses both mediant arguments onto rrNMI.
  MetricResult cnmi(const Partition& c, const Partition& t,
                    const MetricConfig& config) const;

  // (I - B) / (M - B); B per (model, sidedness), M per bound config.
  MetricResult ami(const Partition& c, const Partition& t,
                   const MetricConfig& config) const;

  // The recommended measure: one-sided AMI in the all-partitions model
  // with bound log N.
  MetricResult ami_all_one_sided(const Partition& c, const Partition& t,
                                 const EstimatorSpec& estimator) const;

  // Dispatch by kind with one shared config.
  MetricResult evaluate(MetricKind kind, const Partition& c,
                        const Partition& t, const MetricConfig& config) const;

  // Cached E[I] / E[NMI] building blocks (also used by the theorem
  // harness so identities share estimates with the metrics).
  ExpectationEstimate cached_expected_mi(const Partition& c, const Partition& t,
                                         const RandomModelSpec& spec) const;
  ExpectationEstimate cached_expected_nmi(const Partition& c,
                                          const Partition& t,
                                          const RandomModelSpec& spec,
                                          MeanParam p, BoundKind bound) const;

private:
  std::shared_ptr<ExpectationCache> cache_;
};

}  // namespace partmetrics
