#include "partmetrics/metrics.hpp"

#include <cmath>
#include <limits>

namespace partmetrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string membership_key(const Partition& p) {
  std::string s;
  s.reserve(p.size() * 3);
  for (auto v : p.membership()) {
    s += std::to_string(v);
    s += ',';
  }
  return s;
}

std::string mean_key(MeanParam p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", p.p);
  return buf;
}

}  // namespace

std::string to_string(MetricKind k) {
  switch (k) {
    case MetricKind::Nmi: return "nmi";
    case MetricKind::Rnmi: return "rnmi";
    case MetricKind::Rrnmi: return "rrnmi";
    case MetricKind::Cnmi: return "cnmi";
    case MetricKind::Ami: return "ami";
    case MetricKind::AmiAllOneSided: return "ami1all";
  }
  return "?";
}

std::optional<MetricKind> metric_from_string(const std::string& s) {
  if (s == "nmi") return MetricKind::Nmi;
  if (s == "rnmi") return MetricKind::Rnmi;
  if (s == "rrnmi") return MetricKind::Rrnmi;
  if (s == "cnmi") return MetricKind::Cnmi;
  if (s == "ami") return MetricKind::Ami;
  if (s == "ami1all" || s == "ami-all-one-sided") return MetricKind::AmiAllOneSided;
  return std::nullopt;
}

double bounded_nmi(const Partition& x, const Partition& y, MeanParam p,
                   BoundKind bound) {
  double norm = 0.0;
  switch (bound) {
    case BoundKind::GeneralizedMean:
      norm = generalized_mean(entropy(x.shape()), entropy(y.shape()), p);
      break;
    case BoundKind::LogN:
      norm = x.size() > 0 ? std::log(double(x.size())) : 0.0;
      break;
    case BoundKind::SelfTruth:
      norm = entropy(y.shape());
      break;
  }
  if (norm == 0.0) return 0.0;
  return mutual_information(contingency(x, y)) / norm;
}

ExpectationEstimate ExpectationCache::get_or_compute(
    const std::string& key, const std::function<ExpectationEstimate()>& fn) {
  {
    std::shared_lock lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  ExpectationEstimate value = fn();
  std::unique_lock lock(mu_);
  auto [it, inserted] = map_.try_emplace(key, value);
  return it->second;  // first writer wins
}

std::size_t ExpectationCache::size() const {
  std::shared_lock lock(mu_);
  return map_.size();
}

ExpectationEstimate MetricEngine::cached_expected_mi(
    const Partition& c, const Partition& t, const RandomModelSpec& spec) const {
  std::string key = "EI|";
  key += spec.sidedness == Sidedness::OneSided ? "1|" : "2|";
  key += Ensemble::anchored(spec.model, c).key();
  key += "|";
  if (spec.sidedness == Sidedness::TwoSided) {
    key += Ensemble::anchored(spec.model, t).key();
    if (spec.verify_two_sided_perm) key += "|v";
  } else {
    key += "fixed=" + membership_key(t);
  }
  key += "|" + spec.estimator.key();
  return cache_->get_or_compute(key, [&] { return expected_mi(c, t, spec); });
}

ExpectationEstimate MetricEngine::cached_expected_nmi(
    const Partition& c, const Partition& t, const RandomModelSpec& spec,
    MeanParam p, BoundKind bound) const {
  std::string key = "ENMI|";
  key += spec.sidedness == Sidedness::OneSided ? "1|" : "2|";
  key += Ensemble::anchored(spec.model, c).key();
  key += "|";
  if (spec.sidedness == Sidedness::TwoSided)
    key += Ensemble::anchored(spec.model, t).key();
  else
    key += "fixed=" + membership_key(t);
  key += "|" + spec.estimator.key();
  key += "|" + to_string(bound);
  if (bound == BoundKind::GeneralizedMean) key += "|p=" + mean_key(p);
  return cache_->get_or_compute(
      key, [&] { return expected_nmi(c, t, spec, p, bound); });
}

MetricResult MetricEngine::nmi(const Partition& c, const Partition& t,
                               MeanParam p) const {
  MetricResult r;
  r.kind = MetricKind::Nmi;
  r.config.mean_param = p;
  const double bound = generalized_mean(entropy(c.shape()), entropy(t.shape()), p);
  if (bound == 0.0) {
    r.score = 0.0;
    r.degenerate = true;
    r.note = "degenerate: zero entropy bound, NMI = 0 by convention";
    return r;
  }
  r.score = mutual_information(contingency(c, t)) / bound;
  return r;
}

MetricResult MetricEngine::rnmi(const Partition& c, const Partition& t,
                                const MetricConfig& config) const {
  MetricResult r;
  r.kind = MetricKind::Rnmi;
  r.config = config;
  const auto e = cached_expected_nmi(c, t, config.model_spec,
                                     config.mean_param, config.bound);
  const double observed = bounded_nmi(c, t, config.mean_param, config.bound);
  r.score = observed - e.mean;
  if (e.estimator == EstimatorKind::MonteCarlo) r.band = 2.0 * e.std_error;
  if (entropy(c.shape()) == 0.0 || entropy(t.shape()) == 0.0) {
    r.degenerate = true;
    r.note = "degenerate: trivial partition involved";
  }
  return r;
}

MetricResult MetricEngine::rrnmi(const Partition& c, const Partition& t,
                                 const MetricConfig& config) const {
  MetricResult r;
  r.kind = MetricKind::Rrnmi;
  r.config = config;
  const auto e = cached_expected_nmi(c, t, config.model_spec,
                                     config.mean_param, config.bound);
  const double num = bounded_nmi(c, t, config.mean_param, config.bound) - e.mean;
  const double den = bounded_nmi(t, t, config.mean_param, config.bound) - e.mean;
  if (den <= 0.0) {
    r.score = kNaN;
    r.undefined = true;
    r.note = "undefined: truth indistinguishable from chance (zero denominator)";
    return r;
  }
  r.score = num / den;
  if (e.estimator == EstimatorKind::MonteCarlo) {
    const double a = bounded_nmi(c, t, config.mean_param, config.bound);
    const double b = bounded_nmi(t, t, config.mean_param, config.bound);
    const double lo_e = e.mean - 2.0 * e.std_error;
    const double hi_e = e.mean + 2.0 * e.std_error;
    double lo = r.score, hi = r.score;
    for (double x : {lo_e, hi_e}) {
      if (b - x <= 0.0) continue;
      const double s = (a - x) / (b - x);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    r.band = 0.5 * (hi - lo);
  }
  return r;
}

MetricResult MetricEngine::cnmi(const Partition& c, const Partition& t,
                                const MetricConfig& config) const {
  MetricResult r;
  r.kind = MetricKind::Cnmi;
  r.config = config;
  const MeanParam p = config.mean_param;
  const BoundKind bk = config.bound;

  RandomModelSpec one = config.model_spec;
  one.sidedness = Sidedness::OneSided;

  if (config.model_spec.sidedness == Sidedness::OneSided) {
    // truth fixed: both mediant arguments collapse onto rrNMI
    const auto e = cached_expected_nmi(c, t, one, p, bk);
    const double num = 2.0 * (bounded_nmi(c, t, p, bk) - e.mean);
    const double den = 2.0 * (bounded_nmi(t, t, p, bk) - e.mean);
    if (den <= 0.0) {
      r.score = kNaN;
      r.undefined = true;
      r.note = "undefined: non-positive denominator";
      return r;
    }
    r.score = num / den;
    if (e.estimator == EstimatorKind::MonteCarlo) {
      const double a = bounded_nmi(c, t, p, bk), b = bounded_nmi(t, t, p, bk);
      double lo = r.score, hi = r.score;
      for (double x : {e.mean - 2.0 * e.std_error, e.mean + 2.0 * e.std_error}) {
        if (b - x <= 0.0) continue;
        const double s = (a - x) / (b - x);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
      r.band = 0.5 * (hi - lo);
    }
    return r;
  }

  // two-sided: classical four-term mediant, each rNMI expectation over its
  // own anchored ensemble
  const auto e_t_c = cached_expected_nmi(c, t, one, p, bk);  // E NMI(X,T), X~M(C)
  const auto e_c_t = cached_expected_nmi(t, c, one, p, bk);  // E NMI(X,C), X~M(T)
  const auto e_c_c = cached_expected_nmi(c, c, one, p, bk);  // E NMI(X,C), X~M(C)
  const auto e_t_t = cached_expected_nmi(t, t, one, p, bk);  // E NMI(X,T), X~M(T)

  const double num =
      (bounded_nmi(c, t, p, bk) - e_t_c.mean) + (bounded_nmi(t, c, p, bk) - e_c_t.mean);
  const double den =
      (bounded_nmi(c, c, p, bk) - e_c_c.mean) + (bounded_nmi(t, t, p, bk) - e_t_t.mean);
  if (den <= 0.0) {
    r.score = kNaN;
    r.undefined = true;
    r.note = "undefined: non-positive denominator (self-terms at or below chance)";
    return r;
  }
  r.score = num / den;

  const bool mc = e_t_c.estimator == EstimatorKind::MonteCarlo ||
                  e_c_t.estimator == EstimatorKind::MonteCarlo ||
                  e_c_c.estimator == EstimatorKind::MonteCarlo ||
                  e_t_t.estimator == EstimatorKind::MonteCarlo;
  if (mc) {
    const double a = bounded_nmi(c, t, p, bk) + bounded_nmi(t, c, p, bk);
    const double b = bounded_nmi(c, c, p, bk) + bounded_nmi(t, t, p, bk);
    double lo = r.score, hi = r.score;
    for (int sx : {-1, 1})
      for (int sy : {-1, 1}) {
        const double x = e_t_c.mean + e_c_t.mean +
                         sx * 2.0 * (e_t_c.std_error + e_c_t.std_error);
        const double y = e_c_c.mean + e_t_t.mean +
                         sy * 2.0 * (e_c_c.std_error + e_t_t.std_error);
        if (b - y <= 0.0) continue;
        const double s = (a - x) / (b - y);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    r.band = 0.5 * (hi - lo);
  }
  return r;
}

MetricResult MetricEngine::ami(const Partition& c, const Partition& t,
                               const MetricConfig& config) const {
  MetricResult r;
  r.kind = MetricKind::Ami;
  r.config = config;
  const auto b = cached_expected_mi(c, t, config.model_spec);
  double bound = 0.0;
  switch (config.bound) {
    case BoundKind::GeneralizedMean:
      bound = generalized_mean(entropy(c.shape()), entropy(t.shape()),
                               config.mean_param);
      break;
    case BoundKind::LogN:
      bound = c.size() > 0 ? std::log(double(c.size())) : 0.0;
      break;
    case BoundKind::SelfTruth:
      bound = entropy(t.shape());
      break;
  }
  if (entropy(c.shape()) == 0.0 || entropy(t.shape()) == 0.0) {
    r.degenerate = true;
    r.note = "degenerate: trivial partition involved";
  }
  if (bound - b.mean <= 0.0) {
    r.score = kNaN;
    r.undefined = true;
    r.note = "undefined: bound does not exceed chance expectation";
    return r;
  }
  const double I = mutual_information(contingency(c, t));
  r.score = (I - b.mean) / (bound - b.mean);
  if (b.estimator == EstimatorKind::MonteCarlo) {
    double lo = r.score, hi = r.score;
    for (double x : {b.mean - 2.0 * b.std_error, b.mean + 2.0 * b.std_error}) {
      if (bound - x <= 0.0) continue;
      const double s = (I - x) / (bound - x);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    r.band = 0.5 * (hi - lo);
  }
  return r;
}

MetricResult MetricEngine::ami_all_one_sided(const Partition& c,
                                             const Partition& t,
                                             const EstimatorSpec& estimator) const {
  MetricConfig cfg;
  cfg.model_spec.model = RandomModel::All;
  cfg.model_spec.sidedness = Sidedness::OneSided;
  cfg.model_spec.estimator = estimator;
  cfg.bound = BoundKind::LogN;
  MetricResult r = ami(c, t, cfg);
  r.kind = MetricKind::AmiAllOneSided;
  return r;
}

MetricResult MetricEngine::evaluate(MetricKind kind, const Partition& c,
                                    const Partition& t,
                                    const MetricConfig& config) const {
  switch (kind) {
    case MetricKind::Nmi: return nmi(c, t, config.mean_param);
    case MetricKind::Rnmi: return rnmi(c, t, config);
    case MetricKind::Rrnmi: return rrnmi(c, t, config);
    case MetricKind::Cnmi: return cnmi(c, t, config);
    case MetricKind::Ami: return ami(c, t, config);
    case MetricKind::AmiAllOneSided:
      return ami_all_one_sided(c, t, config.model_spec.estimator);
  }
  throw Error("bad metric kind");
}

}  // namespace partmetrics
