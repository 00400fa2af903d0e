#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "partmetrics/combinatorics.hpp"
#include "partmetrics/info.hpp"
#include "partmetrics/partition.hpp"
#include "partmetrics/rng.hpp"

namespace partmetrics {

// Whether a chance expectation randomizes only the candidate clustering
// (truth fixed) or both partitions.
enum class Sidedness { OneSided, TwoSided };

enum class EstimatorKind { ExactPerm, Enumerate, MonteCarlo };

std::string to_string(EstimatorKind k);

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Enumerate;
  std::size_t samples = 10000;  // MonteCarlo only
  Seed seed;                    // MonteCarlo only

  static EstimatorSpec exact_perm() { return {EstimatorKind::ExactPerm, 0, {}}; }
  static EstimatorSpec enumerate() { return {EstimatorKind::Enumerate, 0, {}}; }
  static EstimatorSpec monte_carlo(std::size_t samples, Seed seed) {
    return {EstimatorKind::MonteCarlo, samples, seed};
  }

  // Picks exact-perm for the perm model, enumeration within the cap and
  // Monte Carlo beyond it.
  static EstimatorSpec automatic(RandomModel model, std::size_t n,
                                 std::size_t samples, Seed seed);

  std::string key() const;  // cache-key component
};

struct RandomModelSpec {
  RandomModel model = RandomModel::Perm;
  Sidedness sidedness = Sidedness::OneSided;
  EstimatorSpec estimator = EstimatorSpec::exact_perm();

  // Forces the two-sided perm expectation through an actual double
  // enumeration instead of using the one-sided identity.
  bool verify_two_sided_perm = false;
};

// An expected-value result with provenance. Exact estimators report
// stdError = 0; sampleCount is the draw count (Monte Carlo) or the
// ensemble/pair count (enumeration), 0 for the closed form.
struct ExpectationEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  EstimatorKind estimator = EstimatorKind::Enumerate;
  std::size_t sample_count = 0;
};

// Exact E[I(C',T')] under uniform relabelings of two fixed shapes,
// computed cell-wise from the hypergeometric overlap law. Symmetric in
// its arguments; throws SizeMismatchError when the shape sums differ.
ExpectationEstimate expected_mi_perm_exact(const Shape& sc, const Shape& st);

// Exact uniform average of I(X, t) over the enumerated ensemble.
ExpectationEstimate expected_mi_enum(const Partition& t, const Ensemble& ensemble,
                                     std::optional<std::size_t> cap = std::nullopt);

// Exact uniform average of I(X, Y) over the product of two ensembles.
ExpectationEstimate expected_mi_enum_two_sided(
    const Ensemble& ec, const Ensemble& et,
    std::optional<std::size_t> cap = std::nullopt);

// Sample mean of I(X, t), X uniform; stdError = sd / sqrt(samples);
// deterministic given (seed, samples) and independent of worker count.
ExpectationEstimate expected_mi_mc(const Partition& t, const Ensemble& ensemble,
                                   std::size_t samples, Seed seed);

ExpectationEstimate expected_mi_mc_two_sided(const Ensemble& ec,
                                             const Ensemble& et,
                                             std::size_t samples, Seed seed);

// Dispatcher over (model, sidedness, estimator). One-sided randomizes the
// candidate c' ~ model(c) against fixed t. Two-sided randomizes both
// sides independently; under perm it returns the one-sided value (the
// expectations coincide) unless verify_two_sided_perm forces the double
// enumeration.
ExpectationEstimate expected_mi(const Partition& c, const Partition& t,
                                const RandomModelSpec& spec);

// Upper-bound flavor used by the metric family: a generalized mean of the
// two entropies, the all-model bound log N, or the self-truth bound
// I(T,T) = H(T).
enum class BoundKind { GeneralizedMean, LogN, SelfTruth };

std::string to_string(BoundKind b);
std::optional<BoundKind> bound_from_string(const std::string& s);

// E[NMI(X, t)] where each sample is normalized per the bound convention:
// GeneralizedMean uses M_p(H(X), H(t)) sample-wise (constant under perm),
// LogN and SelfTruth use a constant normalizer so the estimate reduces to
// E[I] / bound. Degenerate samples (zero normalizer) contribute 0.
ExpectationEstimate expected_nmi(const Partition& c, const Partition& t,
                                 const RandomModelSpec& spec, MeanParam p,
                                 BoundKind bound);

}  // namespace partmetrics
