#include "partmetrics/info.hpp"

#include <cmath>
#include <limits>

namespace partmetrics {

MeanParam MeanParam::minimum() {
  return {-std::numeric_limits<double>::infinity()};
}
MeanParam MeanParam::maximum() {
  return {std::numeric_limits<double>::infinity()};
}

double entropy(const Shape& shape) {
  const double n = double(shape.n());
  if (n == 0) return 0.0;
  KahanSum sum;
  for (auto s : shape.sizes) {
    if (s == 0) continue;
    const double p = double(s) / n;
    sum.add(-p * std::log(p));
  }
  // clamp the -0.0 that a single full block produces
  return sum.value() <= 0.0 ? 0.0 : sum.value();
}

double mutual_information(const ContingencyTable& ct) {
  const double n = double(ct.n);
  KahanSum sum;
  for (std::size_t i = 0; i < ct.rows; ++i) {
    const double a = double(ct.row_margins[i]);
    for (std::size_t j = 0; j < ct.cols; ++j) {
      const std::int64_t m = ct.at(i, j);
      if (m == 0) continue;
      sum.add(double(m) / n * std::log(n * double(m) / (a * double(ct.col_margins[j]))));
    }
  }
  // MI is nonnegative; rounding may leave a tiny negative residue
  return sum.value() < 0.0 ? 0.0 : sum.value();
}

double generalized_mean(double a, double b, MeanParam mean) {
  if (a < 0 || b < 0) throw Error("generalized mean requires a, b >= 0");
  if (a == b) return a;
  const double p = mean.p;
  if (std::isinf(p)) return p > 0 ? std::max(a, b) : std::min(a, b);
  if (p == 0.0) return std::sqrt(a * b);
  if (p < 0 && (a == 0.0 || b == 0.0)) return 0.0;  // limit of the power mean
  if (p == 1.0) return 0.5 * (a + b);
  return std::pow(0.5 * (std::pow(a, p) + std::pow(b, p)), 1.0 / p);
}

double nmi(const Partition& c, const Partition& t, MeanParam p) {
  const double bound = generalized_mean(entropy(c.shape()), entropy(t.shape()), p);
  if (bound == 0.0) return 0.0;
  return mutual_information(contingency(c, t)) / bound;
}

}  // namespace partmetrics
