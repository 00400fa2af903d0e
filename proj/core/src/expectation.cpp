#include "partmetrics/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

namespace partmetrics {

std::string to_string(EstimatorKind k) {
  switch (k) {
    case EstimatorKind::ExactPerm: return "exact-perm";
    case EstimatorKind::Enumerate: return "enumerate";
    case EstimatorKind::MonteCarlo: return "monte-carlo";
  }
  return "?";
}

std::string to_string(BoundKind b) {
  switch (b) {
    case BoundKind::GeneralizedMean: return "generalized-mean";
    case BoundKind::LogN: return "log-n";
    case BoundKind::SelfTruth: return "self-truth";
  }
  return "?";
}

std::optional<BoundKind> bound_from_string(const std::string& s) {
  if (s == "generalized-mean" || s == "genmean") return BoundKind::GeneralizedMean;
  if (s == "log-n" || s == "logn") return BoundKind::LogN;
  if (s == "self-truth" || s == "selftruth") return BoundKind::SelfTruth;
  return std::nullopt;
}

EstimatorSpec EstimatorSpec::automatic(RandomModel model, std::size_t n,
                                       std::size_t samples, Seed seed) {
  if (model == RandomModel::Perm) return exact_perm();
  if (n <= enumeration_cap()) return enumerate();
  return monte_carlo(samples, seed);
}

std::string EstimatorSpec::key() const {
  switch (kind) {
    case EstimatorKind::ExactPerm: return "exact";
    case EstimatorKind::Enumerate: return "enum";
    case EstimatorKind::MonteCarlo:
      return "mc:" + std::to_string(samples) + ":" + std::to_string(seed.root) +
             ":" + std::to_string(seed.stream);
  }
  return "?";
}

ExpectationEstimate expected_mi_perm_exact(const Shape& sc, const Shape& st) {
  const std::size_t n = sc.n();
  if (n != st.n())
    throw SizeMismatchError("shapes sum to different totals: " +
                            std::to_string(n) + " vs " + std::to_string(st.n()));
  std::vector<long double> lf(n + 1, 0.0L);
  for (std::size_t i = 2; i <= n; ++i)
    lf[i] = lf[i - 1] + std::log(static_cast<long double>(i));

  const long double dn = static_cast<long double>(n);
  long double total = 0.0L;
  for (auto a : sc.sizes) {
    for (auto b : st.sizes) {
      const std::size_t lo = (a + b > n) ? std::size_t(a) + b - n : 1;
      const std::size_t hi = std::min<std::size_t>(a, b);
      for (std::size_t m = lo; m <= hi; ++m) {
        const long double lp = lf[a] + lf[n - a] + lf[b] + lf[n - b] - lf[n] -
                               lf[m] - lf[a - m] - lf[b - m] -
                               lf[n - a - b + m];
        const long double lm = static_cast<long double>(m);
        total += std::exp(lp) * (lm / dn) *
                 std::log(dn * lm / (static_cast<long double>(a) *
                                     static_cast<long double>(b)));
      }
    }
  }
  ExpectationEstimate e;
  e.mean = double(total);
  e.std_error = 0.0;
  e.estimator = EstimatorKind::ExactPerm;
  e.sample_count = 0;
  return e;
}

ExpectationEstimate expected_mi_enum(const Partition& t, const Ensemble& ensemble,
                                     std::optional<std::size_t> cap) {
  if (t.size() != ensemble.n)
    throw SizeMismatchError("fixed partition size differs from ensemble n");
  KahanSum sum;
  std::size_t count = 0;
  for_each_partition(ensemble.n, EnumRestriction::of(ensemble),
                     [&](const Partition& x) {
                       sum.add(mutual_information(contingency(x, t)));
                       ++count;
                       return true;
                     },
                     cap);
  ExpectationEstimate e;
  e.mean = count ? sum.value() / double(count) : 0.0;
  e.estimator = EstimatorKind::Enumerate;
  e.sample_count = count;
  return e;
}

ExpectationEstimate expected_mi_enum_two_sided(const Ensemble& ec,
                                               const Ensemble& et,
                                               std::optional<std::size_t> cap) {
  if (ec.n != et.n) throw SizeMismatchError("ensembles disagree on n");
  std::vector<Partition> left = enumerate_partitions(ec.n, EnumRestriction::of(ec), cap);
  std::vector<Partition> right;
  const bool same = ec.key() == et.key();
  if (!same) right = enumerate_partitions(et.n, EnumRestriction::of(et), cap);
  const std::vector<Partition>& rt = same ? left : right;

  KahanSum sum;
  for (const auto& x : left)
    for (const auto& y : rt) sum.add(mutual_information(contingency(x, y)));
  ExpectationEstimate e;
  const std::size_t pairs = left.size() * rt.size();
  e.mean = pairs ? sum.value() / double(pairs) : 0.0;
  e.estimator = EstimatorKind::Enumerate;
  e.sample_count = pairs;
  return e;
}

namespace {

// Deterministic Monte Carlo mean/stderr: per-sample values are a pure
// function of the sample index (counter-based substreams), accumulated in
// index order, so the result is byte-identical for any worker count.
template <typename Fn>
ExpectationEstimate mc_estimate(std::size_t samples, Fn&& value_at) {
  if (samples < 2) throw Error("monte carlo requires samples >= 2");
  std::vector<double> vals(samples);
  const unsigned workers = std::min<unsigned>(worker_threads(),
                                              unsigned(std::max<std::size_t>(1, samples / 256)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < samples; ++i) vals[i] = value_at(i);
  } else {
    std::vector<std::future<void>> futs;
    const std::size_t chunk = (samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(samples, lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) vals[i] = value_at(i);
      }));
    }
    for (auto& f : futs) f.get();
  }

  KahanSum sum;
  for (double v : vals) sum.add(v);
  const double mean = sum.value() / double(samples);
  KahanSum sq;
  for (double v : vals) sq.add((v - mean) * (v - mean));
  const double var = sq.value() / double(samples - 1);
  ExpectationEstimate e;
  e.mean = mean;
  e.std_error = std::sqrt(var / double(samples));
  e.estimator = EstimatorKind::MonteCarlo;
  e.sample_count = samples;
  return e;
}

}  // namespace

ExpectationEstimate expected_mi_mc(const Partition& t, const Ensemble& ensemble,
                                   std::size_t samples, Seed seed) {
  if (t.size() != ensemble.n)
    throw SizeMismatchError("fixed partition size differs from ensemble n");
  count_table().ensure(ensemble.n);
  return mc_estimate(samples, [&](std::size_t i) {
    Partition x = sample_partition(ensemble, seed.substream(i));
    return mutual_information(contingency(x, t));
  });
}

ExpectationEstimate expected_mi_mc_two_sided(const Ensemble& ec,
                                             const Ensemble& et,
                                             std::size_t samples, Seed seed) {
  if (ec.n != et.n) throw SizeMismatchError("ensembles disagree on n");
  count_table().ensure(ec.n);
  return mc_estimate(samples, [&](std::size_t i) {
    Rng rng(seed.substream(i));
    Partition x = sample_partition_with(ec, rng);
    Partition y = sample_partition_with(et, rng);
    return mutual_information(contingency(x, y));
  });
}

ExpectationEstimate expected_mi(const Partition& c, const Partition& t,
                                const RandomModelSpec& spec) {
  if (c.size() != t.size())
    throw SizeMismatchError("partitions cover different element counts");
  if (spec.estimator.kind == EstimatorKind::ExactPerm &&
      spec.model != RandomModel::Perm)
    throw Error("exact-perm estimator is only valid under the perm model");

  const Ensemble ens_c = Ensemble::anchored(spec.model, c);
  const Ensemble ens_t = Ensemble::anchored(spec.model, t);

  if (spec.sidedness == Sidedness::OneSided) {
    switch (spec.estimator.kind) {
      case EstimatorKind::ExactPerm:
        return expected_mi_perm_exact(c.shape(), t.shape());
      case EstimatorKind::Enumerate:
        return expected_mi_enum(t, ens_c);
      case EstimatorKind::MonteCarlo:
        return expected_mi_mc(t, ens_c, spec.estimator.samples,
                              spec.estimator.seed);
    }
  }

  // two-sided
  if (spec.model == RandomModel::Perm && !spec.verify_two_sided_perm) {
    // the two-sided perm expectation equals the one-sided one
    RandomModelSpec one = spec;
    one.sidedness = Sidedness::OneSided;
    return expected_mi(c, t, one);
  }
  switch (spec.estimator.kind) {
    case EstimatorKind::ExactPerm:  // verify flag set: do the real double sum
    case EstimatorKind::Enumerate:
      return expected_mi_enum_two_sided(ens_c, ens_t);
    case EstimatorKind::MonteCarlo:
      return expected_mi_mc_two_sided(ens_c, ens_t, spec.estimator.samples,
                                      spec.estimator.seed);
  }
  throw Error("bad estimator");
}

namespace {

double nmi_value(const Partition& x, const Partition& y, double normalizer) {
  if (normalizer == 0.0) return 0.0;
  return mutual_information(contingency(x, y)) / normalizer;
}

ExpectationEstimate scaled(ExpectationEstimate e, double denom) {
  if (denom == 0.0) {
    e.mean = 0.0;  // every sample is degenerate, NMI convention 0
    e.std_error = 0.0;
    return e;
  }
  e.mean /= denom;
  e.std_error /= denom;
  return e;
}

}  // namespace

ExpectationEstimate expected_nmi(const Partition& c, const Partition& t,
                                 const RandomModelSpec& spec, MeanParam p,
                                 BoundKind bound) {
  const double h_t = entropy(t.shape());
  const double log_n = t.size() > 0 ? std::log(double(t.size())) : 0.0;

  // constant-normalizer cases reduce to a scaled E[I]
  if (bound == BoundKind::LogN) return scaled(expected_mi(c, t, spec), log_n);
  if (bound == BoundKind::SelfTruth) return scaled(expected_mi(c, t, spec), h_t);

  // generalized mean: constant under perm (shape fixed across the ensemble)
  if (spec.model == RandomModel::Perm) {
    const double norm = generalized_mean(entropy(c.shape()), h_t, p);
    return scaled(expected_mi(c, t, spec), norm);
  }

  // genuinely per-sample normalizers
  if (spec.estimator.kind == EstimatorKind::ExactPerm)
    throw Error("exact-perm estimator is only valid under the perm model");

  const Ensemble ens_c = Ensemble::anchored(spec.model, c);
  const Ensemble ens_t = Ensemble::anchored(spec.model, t);

  if (spec.sidedness == Sidedness::OneSided) {
    if (spec.estimator.kind == EstimatorKind::Enumerate) {
      KahanSum sum;
      std::size_t count = 0;
      for_each_partition(ens_c.n, EnumRestriction::of(ens_c),
                         [&](const Partition& x) {
                           sum.add(nmi_value(x, t, generalized_mean(
                                                       entropy(x.shape()), h_t, p)));
                           ++count;
                           return true;
                         });
      ExpectationEstimate e;
      e.mean = count ? sum.value() / double(count) : 0.0;
      e.estimator = EstimatorKind::Enumerate;
      e.sample_count = count;
      return e;
    }
    count_table().ensure(ens_c.n);
    return mc_estimate(spec.estimator.samples, [&](std::size_t i) {
      Partition x = sample_partition(ens_c, spec.estimator.seed.substream(i));
      return nmi_value(x, t, generalized_mean(entropy(x.shape()), h_t, p));
    });
  }

  // two-sided, per-sample normalizer
  if (spec.estimator.kind == EstimatorKind::Enumerate) {
    auto left = enumerate_partitions(ens_c.n, EnumRestriction::of(ens_c));
    const bool same = ens_c.key() == ens_t.key();
    auto right = same ? left : enumerate_partitions(ens_t.n, EnumRestriction::of(ens_t));
    KahanSum sum;
    for (const auto& x : left)
      for (const auto& y : right)
        sum.add(nmi_value(x, y, generalized_mean(entropy(x.shape()),
                                                 entropy(y.shape()), p)));
    ExpectationEstimate e;
    const std::size_t pairs = left.size() * right.size();
    e.mean = pairs ? sum.value() / double(pairs) : 0.0;
    e.estimator = EstimatorKind::Enumerate;
    e.sample_count = pairs;
    return e;
  }
  count_table().ensure(ens_c.n);
  return mc_estimate(spec.estimator.samples, [&](std::size_t i) {
    Rng rng(spec.estimator.seed.substream(i));
    Partition x = sample_partition_with(ens_c, rng);
    Partition y = sample_partition_with(ens_t, rng);
    return nmi_value(x, y, generalized_mean(entropy(x.shape()),
                                            entropy(y.shape()), p));
  });
}

}  // namespace partmetrics
