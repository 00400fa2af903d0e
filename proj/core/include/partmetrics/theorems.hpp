#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "partmetrics/metrics.hpp"

namespace partmetrics {

struct TheoremWitness {
  Partition c;
  Partition t;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string detail;
};

// Outcome of one executable relationship check. Reproducible bit-for-bit
// from (seed, params); a failed check always carries at least one witness
// with full inputs for replay.
struct TheoremReport {
  std::string id;
  std::string params;
  Seed seed;
  std::size_t instances = 0;
  std::size_t skipped = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::vector<TheoremWitness> witnesses;
  std::vector<std::string> notes;
};

// One-sided vs two-sided equivalence under the perm model: expectations
// by single vs double enumeration, and the AMI scores themselves.
TheoremReport check_self_specialization(std::size_t trials, std::size_t max_n,
                                        Seed seed);

// E over perm(C) of I against two equal-shape fixed partitions agree.
TheoremReport check_exchangeability(std::size_t trials, std::size_t max_n,
                                    Seed seed);

// rrNMI equals one-sided cNMI (truth fixed) in the given model, given
// shared expectation estimates.
TheoremReport check_rrnmi_cnmi(std::size_t trials, std::size_t max_n,
                               RandomModel model, Seed seed);

// Two-sided cNMI lies between the two one-sided component ratios when the
// self-terms are positive; under perm it additionally equals their
// harmonic mean.
TheoremReport check_mediant(std::size_t trials, std::size_t max_n,
                            RandomModel model, Seed seed);

// Randomized search for |cNMI - AMI| > 1e-6: the all-model case
// (two-sided, enumeration-exact expectations) and the perm-model
// denominators case. Absence after the budget is reported, not asserted.
TheoremReport find_cnmi_ami_gap(std::size_t max_n, std::size_t budget, Seed seed);

// The free-lunch demonstration: over truths sampled from M_all(n), the
// singletons guess attains the strictly highest mean NMI, while the mean
// one-sided all-model AMI of every fixed guess is within 4 stdError of 0.
// Also emits the finite-size-effect diagnostic (mean NMI of balanced-k
// guesses as k grows) as note lines.
TheoremReport check_free_lunch(std::size_t n_truths, std::size_t n,
                               std::size_t baseline_samples, Seed seed);

void print_report(std::ostream& out, const TheoremReport& report);

}  // namespace partmetrics
