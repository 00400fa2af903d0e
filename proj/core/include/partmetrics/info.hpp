#pragma once

#include "partmetrics/partition.hpp"

namespace partmetrics {

// Power-mean exponent: -inf = min, 0 = geometric, 1 = arithmetic,
// +inf = max. Monotone in p by the generalized-mean inequality.
struct MeanParam {
  double p = 0.0;

  static MeanParam geometric() { return {0.0}; }
  static MeanParam arithmetic() { return {1.0}; }
  static MeanParam minimum();
  static MeanParam maximum();

  bool operator==(const MeanParam&) const = default;
};

// All values are in nats; the output layer converts to bits on request.
constexpr double kNatsToBits = 1.4426950408889634074;  // 1/ln 2

// -sum (|C|/N) log(|C|/N), with 0 log 0 = 0.
double entropy(const Shape& shape);

// sum_C sum_T (|C^T|/N) log(N |C^T| / (|C||T|)); zero cells contribute 0.
// Accumulated with compensated summation.
double mutual_information(const ContingencyTable& ct);

// ((a^p + b^p)/2)^(1/p) with the min/geometric/max limits; a, b >= 0.
double generalized_mean(double a, double b, MeanParam p);

// I(C,T) / M_p(H(C), H(T)); 0 by convention when the mean is 0 (both
// partitions trivial -- reported as degenerate by the metrics layer).
double nmi(const Partition& c, const Partition& t, MeanParam p);

}  // namespace partmetrics
