#include "partmetrics/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <ostream>

namespace partmetrics {

std::vector<std::uint32_t> degrade_membership(const Partition& truth, double mu,
                                              Seed seed) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw Error("mu must lie in [0,1]");
  const std::size_t n = truth.size();
  std::vector<std::uint32_t> mem(truth.membership().begin(),
                                 truth.membership().end());
  const std::size_t moved = std::size_t(std::llround(mu * double(n)));
  if (moved == 0) return mem;
  const std::size_t k = truth.block_count();
  if (k < 2) throw Error("cannot degrade a single-block truth (mu > 0)");

  Rng rng(seed);
  // choose `moved` distinct nodes: partial Fisher-Yates
  std::vector<std::uint32_t> idx(n);
  for (std::uint32_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < moved; ++i) {
    const std::size_t j = i + std::size_t(rng.next_below(n - i));
    std::swap(idx[i], idx[j]);
  }
  for (std::size_t i = 0; i < moved; ++i) {
    const std::uint32_t node = idx[i];
    std::uint32_t b = std::uint32_t(rng.next_below(k - 1));
    if (b >= mem[node]) ++b;  // uniform among the other k-1 original blocks
    mem[node] = b;
  }
  return mem;
}

Partition degrade(const Partition& truth, double mu, Seed seed) {
  return Partition::from_membership(degrade_membership(truth, mu, seed));
}

Partition balanced_partition(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw Error("balanced partition requires 1 <= k <= n");
  std::vector<std::uint32_t> mem(n);
  for (std::size_t i = 0; i < n; ++i) mem[i] = std::uint32_t(i % k);
  return Partition::from_membership(mem);
}

std::vector<MetricRequest> default_sweep_metrics(std::size_t n,
                                                 std::size_t mc_samples,
                                                 Seed seed) {
  std::vector<MetricRequest> out;

  MetricRequest m_nmi;
  m_nmi.kind = MetricKind::Nmi;
  m_nmi.label = "nmi";
  out.push_back(m_nmi);

  const EstimatorSpec est =
      EstimatorSpec::automatic(RandomModel::All, n, mc_samples, seed);

  MetricRequest m_ami;
  m_ami.kind = MetricKind::AmiAllOneSided;
  m_ami.label = "ami1all";
  m_ami.config.model_spec = {RandomModel::All, Sidedness::OneSided, est};
  m_ami.config.bound = BoundKind::LogN;
  out.push_back(m_ami);

  MetricRequest m_rr;
  m_rr.kind = MetricKind::Rrnmi;
  m_rr.label = "rrnmi";
  m_rr.config.model_spec = {RandomModel::All, Sidedness::OneSided, est};
  out.push_back(m_rr);

  return out;
}

std::vector<SweepRow> run_trap_sweep(const SweepConfig& config) {
  const Partition truth =
      config.truth ? *config.truth : balanced_partition(config.n, config.k);
  const std::size_t n = truth.size();
  for (double mu : config.mu_grid)
    if (!(mu >= 0.0 && mu <= 1.0)) throw Error("mu grid value outside [0,1]");
  if (config.replicates < 1) throw Error("replicates must be >= 1");

  // estimator seeds must not collide with degrade seeds
  const Seed est_seed = {config.seed.root,
                         config.seed.stream + (std::uint64_t(1) << 48)};
  const std::vector<MetricRequest> metrics =
      config.metrics.empty()
          ? default_sweep_metrics(n, config.mc_samples, est_seed)
          : config.metrics;

  MetricEngine engine;
  count_table().ensure(n);

  struct Cell {
    double mu;
    std::size_t rep;
  };
  std::vector<Cell> cells;
  for (std::size_t mi = 0; mi < config.mu_grid.size(); ++mi)
    for (std::size_t rep = 0; rep < config.replicates; ++rep)
      cells.push_back({config.mu_grid[mi], rep});

  const Partition singles = Partition::singletons(n);
  const Partition oneblock = Partition::one_block(n);

  // one row bundle per (mu, replicate), computed independently
  std::vector<std::vector<SweepRow>> bundles(cells.size());
  auto compute_cell = [&](std::size_t ci) {
    const auto [mu, rep] = cells[ci];
    Partition degraded = degrade(truth, mu, config.seed.substream(ci));
    const std::pair<std::string, const Partition*> guesses[] = {
        {"degraded", &degraded}, {"singletons", &singles}, {"one-block", &oneblock}};
    for (const auto& [gname, gp] : guesses) {
      for (const auto& req : metrics) {
        MetricResult res = engine.evaluate(req.kind, *gp, truth, req.config);
        SweepRow row;
        row.mu = mu;
        row.replicate = rep;
        row.guess = gname;
        row.metric = req.label.empty() ? to_string(req.kind) : req.label;
        row.score = res.score;
        row.std_err = res.band ? *res.band / 2.0 : 0.0;
        bundles[ci].push_back(std::move(row));
      }
    }
  };

  const unsigned threads = config.threads ? config.threads : worker_threads();
  if (threads <= 1 || cells.size() <= 1) {
    for (std::size_t ci = 0; ci < cells.size(); ++ci) compute_cell(ci);
  } else {
    std::vector<std::future<void>> futs;
    const std::size_t chunk = (cells.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(cells.size(), lo + chunk);
      if (lo >= hi) break;
      futs.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (std::size_t ci = lo; ci < hi; ++ci) compute_cell(ci);
      }));
    }
    for (auto& f : futs) f.get();
  }

  std::vector<SweepRow> rows;
  rows.reserve(cells.size() * metrics.size() * 3);
  for (auto& b : bundles)
    for (auto& row : b) rows.push_back(std::move(row));
  return rows;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "mu,replicate,guess,metric,score,stderr\n";
  for (const auto& r : rows)
    out << format_double(r.mu) << ',' << r.replicate << ',' << r.guess << ','
        << r.metric << ',' << format_double(r.score) << ','
        << format_double(r.std_err) << '\n';
}

std::vector<std::string> monotonicity_warnings(const SweepConfig& config,
                                               const std::vector<SweepRow>& rows) {
  // mean degraded score per (metric, mu), with replicate-spread stderr
  struct Acc {
    double sum = 0.0, sumsq = 0.0, se_est = 0.0;
    std::size_t count = 0;
  };
  std::map<std::string, std::map<double, Acc>> table;
  for (const auto& r : rows) {
    if (r.guess != "degraded" || std::isnan(r.score)) continue;
    Acc& a = table[r.metric][r.mu];
    a.sum += r.score;
    a.sumsq += r.score * r.score;
    a.se_est = std::max(a.se_est, r.std_err);
    ++a.count;
  }
  std::vector<std::string> warnings;
  for (const auto& [metric, by_mu] : table) {
    double prev_mean = 0.0, prev_se = 0.0;
    bool have_prev = false;
    for (const auto& [mu, acc] : by_mu) {
      const double mean = acc.sum / double(acc.count);
      double se = acc.se_est;
      if (acc.count > 1) {
        const double var = std::max(
            0.0, (acc.sumsq - acc.sum * acc.sum / double(acc.count)) /
                     double(acc.count - 1));
        se = std::sqrt(var / double(acc.count) + se * se);
      }
      if (have_prev &&
          mean > prev_mean + 2.0 * std::sqrt(se * se + prev_se * prev_se)) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "warning: %s mean score increased from %.6g to %.6g at mu=%g "
                      "(beyond 2*stdError)",
                      metric.c_str(), prev_mean, mean, mu);
        warnings.emplace_back(buf);
      }
      prev_mean = mean;
      prev_se = se;
      have_prev = true;
    }
  }
  (void)config;
  return warnings;
}

}  // namespace partmetrics
