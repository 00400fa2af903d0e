// partmetrics: score clustering pairs, estimate chance baselines, verify
// the measure relationships, and run the label-noise trap sweep.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "partmetrics/metrics.hpp"
#include "partmetrics/sweep.hpp"
#include "partmetrics/theorems.hpp"

using json = nlohmann::ordered_json;
using namespace partmetrics;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitSizeMismatch = 3;
constexpr int kExitUndefinedMetric = 4;
constexpr int kExitResourceCap = 5;

struct CommonFlags {
  std::string model = "perm";
  std::string sided = "one";
  std::string bound;  // empty = per-metric default
  std::string mean_p = "0";
  std::string estimator = "auto";
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
};

MeanParam parse_mean_p(const std::string& s) {
  if (s == "min") return MeanParam::minimum();
  if (s == "max") return MeanParam::maximum();
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos == s.size()) return MeanParam{v};
  } catch (const std::exception&) {
  }
  throw Error("bad --mean-p value '" + s + "' (want a real, 'min' or 'max')");
}

EstimatorSpec parse_estimator(const CommonFlags& flags, RandomModel model,
                              std::size_t n) {
  Seed seed{flags.seed, 0};
  if (flags.estimator == "auto")
    return EstimatorSpec::automatic(model, n, flags.samples, seed);
  if (flags.estimator == "exact") return EstimatorSpec::exact_perm();
  if (flags.estimator == "enum") return EstimatorSpec::enumerate();
  if (flags.estimator == "mc")
    return EstimatorSpec::monte_carlo(flags.samples, seed);
  throw Error("bad --estimator '" + flags.estimator +
              "' (want auto|exact|enum|mc)");
}

MetricConfig build_config(const CommonFlags& flags, MetricKind kind,
                          std::size_t n) {
  MetricConfig cfg;
  auto model = random_model_from_string(flags.model);
  if (!model) throw Error("bad --model '" + flags.model + "'");
  cfg.model_spec.model = *model;
  if (flags.sided == "one")
    cfg.model_spec.sidedness = Sidedness::OneSided;
  else if (flags.sided == "two")
    cfg.model_spec.sidedness = Sidedness::TwoSided;
  else
    throw Error("bad --sided '" + flags.sided + "' (want one|two)");
  cfg.mean_param = parse_mean_p(flags.mean_p);

  if (flags.bound.empty()) {
    // per-metric default: log N bound for the one-sided all-model AMI,
    // generalized mean elsewhere
    cfg.bound = (kind == MetricKind::Ami && *model == RandomModel::All &&
                 cfg.model_spec.sidedness == Sidedness::OneSided)
                    ? BoundKind::LogN
                    : BoundKind::GeneralizedMean;
  } else {
    auto b = bound_from_string(flags.bound);
    if (!b) throw Error("bad --bound '" + flags.bound + "'");
    cfg.bound = *b;
  }

  if (kind == MetricKind::AmiAllOneSided) {
    cfg.model_spec.model = RandomModel::All;
    cfg.model_spec.sidedness = Sidedness::OneSided;
    cfg.bound = BoundKind::LogN;
  }
  cfg.model_spec.estimator = parse_estimator(flags, cfg.model_spec.model, n);
  return cfg;
}

std::vector<MetricKind> parse_metric_list(const std::string& csv) {
  std::vector<MetricKind> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    auto k = metric_from_string(tok);
    if (!k) throw Error("unknown metric '" + tok + "'");
    out.push_back(*k);
  }
  if (out.empty()) throw Error("empty metric list");
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json result_to_json(const MetricResult& r) {
  json j;
  j["kind"] = to_string(r.kind);
  j["score"] = r.score;
  if (r.band) j["band"] = *r.band;
  j["degenerate"] = r.degenerate;
  j["undefined"] = r.undefined;
  if (!r.note.empty()) j["note"] = r.note;
  if (r.kind != MetricKind::Nmi) {
    j["model"] = to_string(r.config.model_spec.model);
    j["sided"] =
        r.config.model_spec.sidedness == Sidedness::OneSided ? "one" : "two";
    j["estimator"] = to_string(r.config.model_spec.estimator.kind);
    j["bound"] = to_string(r.config.bound);
  }
  j["meanP"] = r.config.mean_param.p;
  return j;
}

int cmd_score(const std::string& file_c, const std::string& file_t,
              const std::string& metric_csv, const CommonFlags& flags,
              bool as_json, bool as_csv) {
  Partition c = load_partition_file(file_c);
  Partition t = load_partition_file(file_t);
  if (c.size() != t.size())
    throw SizeMismatchError("partitions cover different element counts: " +
                            std::to_string(c.size()) + " vs " +
                            std::to_string(t.size()));

  MetricEngine engine;
  std::vector<MetricResult> results;
  for (MetricKind kind : parse_metric_list(metric_csv)) {
    MetricConfig cfg = build_config(flags, kind, c.size());
    results.push_back(engine.evaluate(kind, c, t, cfg));
  }

  bool any_undefined = false;
  if (as_json) {
    json j;
    j["n"] = c.size();
    j["metrics"] = json::array();
    for (const auto& r : results) {
      j["metrics"].push_back(result_to_json(r));
      any_undefined |= r.undefined;
    }
    std::cout << j.dump(2) << "\n";
  } else if (as_csv) {
    std::cout << "metric,score,band,degenerate,undefined\n";
    for (const auto& r : results) {
      std::cout << to_string(r.kind) << ',' << (r.undefined ? "nan" : fmt(r.score))
                << ',' << (r.band ? fmt(*r.band) : "0") << ','
                << (r.degenerate ? 1 : 0) << ',' << (r.undefined ? 1 : 0) << '\n';
      any_undefined |= r.undefined;
    }
  } else {
    std::printf("%-8s %-16s %-10s %s\n", "metric", "score", "band", "flags");
    for (const auto& r : results) {
      std::string flags_text;
      if (r.undefined) flags_text += "undefined ";
      if (r.degenerate) flags_text += "degenerate ";
      if (!r.note.empty()) flags_text += "(" + r.note + ")";
      std::printf("%-8s %-16s %-10s %s\n", to_string(r.kind).c_str(),
                  r.undefined ? "nan" : fmt(r.score).c_str(),
                  r.band ? fmt(*r.band).c_str() : "-", flags_text.c_str());
      any_undefined |= r.undefined;
    }
  }
  return any_undefined ? kExitUndefinedMetric : kExitOk;
}

int cmd_expect(const std::string& truth_file, const std::string& candidate_file,
               const CommonFlags& flags, bool as_json, bool bits) {
  Partition t = load_partition_file(truth_file);
  Partition anchor = candidate_file.empty() ? t : load_partition_file(candidate_file);
  if (anchor.size() != t.size())
    throw SizeMismatchError("candidate and truth cover different element counts");

  RandomModelSpec spec;
  auto model = random_model_from_string(flags.model);
  if (!model) throw Error("bad --model '" + flags.model + "'");
  spec.model = *model;
  spec.sidedness = flags.sided == "two" ? Sidedness::TwoSided : Sidedness::OneSided;
  spec.estimator = parse_estimator(flags, spec.model, t.size());

  ExpectationEstimate e = expected_mi(anchor, t, spec);
  const double unit = bits ? kNatsToBits : 1.0;
  json j;
  j["mean"] = e.mean * unit;
  j["stdError"] = e.std_error * unit;
  j["estimator"] = to_string(e.estimator);
  j["sampleCount"] = e.sample_count;
  j["units"] = bits ? "bits" : "nats";
  if (as_json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("mean       %s %s\nstdError   %s\nestimator  %s\nsamples    %zu\n",
                fmt(e.mean * unit).c_str(), bits ? "bits" : "nats",
                fmt(e.std_error * unit).c_str(),
                to_string(e.estimator).c_str(), e.sample_count);
  }
  return kExitOk;
}

struct VerifyOptions {
  std::vector<std::string> suites;
  bool all = false;
  bool list = false;
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t max_n = 7;
  std::size_t gap_max_n = 8;
  std::size_t budget = 200;
  std::size_t truths = 2000;
  std::size_t freelunch_n = 50;
  std::size_t baseline_samples = 10000;
};

const std::vector<std::string> kSuites = {
    "self-specialization", "exchangeability", "rrnmi-cnmi",
    "mediant",             "cnmi-ami-gap",    "free-lunch"};

int cmd_verify(const VerifyOptions& opt) {
  if (opt.list) {
    for (const auto& s : kSuites) std::cout << s << "\n";
    return kExitOk;
  }
  std::vector<std::string> selected = opt.suites;
  if (opt.all || selected.empty()) selected = kSuites;
  for (const auto& s : selected)
    if (std::find(kSuites.begin(), kSuites.end(), s) == kSuites.end()) {
      std::cerr << "unknown suite '" << s << "' (see --list)\n";
      return kExitUsage;
    }

  Seed seed{opt.seed, 0};
  std::vector<TheoremReport> reports;
  for (const auto& s : selected) {
    if (s == "self-specialization")
      reports.push_back(check_self_specialization(opt.trials, opt.max_n, seed));
    else if (s == "exchangeability")
      reports.push_back(check_exchangeability(opt.trials, opt.max_n, seed));
    else if (s == "rrnmi-cnmi")
      for (RandomModel m : {RandomModel::Perm, RandomModel::Num, RandomModel::All})
        reports.push_back(check_rrnmi_cnmi(opt.trials, opt.max_n, m, seed));
    else if (s == "mediant")
      for (RandomModel m : {RandomModel::Perm, RandomModel::Num, RandomModel::All})
        reports.push_back(check_mediant(opt.trials, opt.max_n, m, seed));
    else if (s == "cnmi-ami-gap")
      reports.push_back(find_cnmi_ami_gap(opt.gap_max_n, opt.budget, seed));
    else if (s == "free-lunch")
      reports.push_back(check_free_lunch(opt.truths, opt.freelunch_n,
                                         opt.baseline_samples, seed));
  }

  bool all_pass = true;
  for (const auto& r : reports) {
    print_report(std::cout, r);
    all_pass &= r.pass;
  }
  std::cout << (all_pass ? "verify: all suites passed\n"
                         : "verify: FAILURES present\n");
  return all_pass ? kExitOk : kExitVerifyFailure;
}

std::vector<double> parse_mu_grid(const std::string& grid,
                                  const std::string& list) {
  std::vector<double> out;
  if (!list.empty()) {
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  } else if (!grid.empty()) {
    double lo, hi, step;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
        step <= 0)
      throw Error("bad --mu-grid '" + grid + "' (want lo:hi:step)");
    for (double mu = lo; mu <= hi + 1e-12; mu += step)
      out.push_back(std::min(mu, hi));
  }
  return out;
}

int cmd_trap(const SweepConfig& cfg, const std::string& out_path) {
  std::vector<SweepRow> rows = run_trap_sweep(cfg);
  for (const auto& w : monotonicity_warnings(cfg, rows)) std::cerr << w << "\n";
  if (out_path.empty()) {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + out_path + "'");
    write_sweep_csv(out, rows);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"partition-similarity metrics under explicit random models"};
  app.require_subcommand(1);

  // score
  auto* score = app.add_subcommand("score", "score two partition files");
  std::string file_c, file_t, metric_csv = "nmi,ami1all";
  CommonFlags sflags;
  bool score_json = false, score_csv = false;
  score->add_option("clustering", file_c, "candidate partition file")->required();
  score->add_option("truth", file_t, "ground-truth partition file")->required();
  score->add_option("--metric,--metrics", metric_csv,
                    "comma list: nmi,rnmi,rrnmi,cnmi,ami,ami1all");
  score->add_option("--model", sflags.model, "random model: all|num|perm");
  score->add_option("--sided", sflags.sided, "one|two");
  score->add_option("--bound", sflags.bound, "genmean|logn|selftruth");
  score->add_option("--mean-p", sflags.mean_p, "power-mean exponent, or min|max");
  score->add_option("--estimator", sflags.estimator, "auto|exact|enum|mc");
  score->add_option("--samples", sflags.samples, "Monte Carlo sample count");
  score->add_option("--seed", sflags.seed, "root seed");
  score->add_flag("--json", score_json, "JSON output");
  score->add_flag("--csv", score_csv, "CSV output");

  // expect
  auto* expect = app.add_subcommand("expect", "expected MI under a random model");
  std::string truth_file, candidate_file;
  CommonFlags eflags;
  eflags.model = "all";
  bool expect_json = false, expect_bits = false;
  expect->add_option("truth", truth_file, "ground-truth partition file")->required();
  expect->add_option("--candidate", candidate_file,
                     "anchor partition for perm/num ensembles (default: truth)");
  expect->add_option("--model", eflags.model, "all|num|perm");
  expect->add_option("--sided", eflags.sided, "one|two");
  expect->add_option("--estimator", eflags.estimator, "auto|exact|enum|mc");
  expect->add_option("--samples", eflags.samples, "Monte Carlo sample count");
  expect->add_option("--seed", eflags.seed, "root seed");
  expect->add_flag("--json", expect_json, "JSON output");
  expect->add_flag("--bits", expect_bits, "report bits instead of nats");

  // verify
  auto* verify = app.add_subcommand("verify", "run the theorem suites");
  VerifyOptions vopt;
  verify->add_option("suites", vopt.suites, "suite names (see --list)");
  verify->add_flag("--all", vopt.all, "run every suite");
  verify->add_flag("--list", vopt.list, "list suite names and exit");
  verify->add_option("--seed", vopt.seed, "root seed");
  verify->add_option("--trials", vopt.trials, "random pairs per suite");
  verify->add_option("--max-n", vopt.max_n, "largest N for random pairs");
  verify->add_option("--gap-max-n", vopt.gap_max_n, "largest N for the gap search");
  verify->add_option("--budget", vopt.budget, "gap-search pair budget");
  verify->add_option("--truths", vopt.truths, "free-lunch sampled truths");
  verify->add_option("--free-lunch-n", vopt.freelunch_n, "free-lunch N");
  verify->add_option("--baseline-samples", vopt.baseline_samples,
                     "free-lunch Monte Carlo baseline samples");

  // trap
  auto* trap = app.add_subcommand("trap", "label-noise degradation sweep (CSV)");
  SweepConfig tcfg;
  std::string trap_truth_file, mu_grid_spec, mu_list, trap_metrics, trap_out;
  std::uint64_t trap_seed = 1;
  unsigned trap_threads = 0;
  trap->add_option("--n", tcfg.n, "elements (with --k builds the truth)");
  trap->add_option("--k", tcfg.k, "truth blocks (near-equal sizes)");
  trap->add_option("--truth", trap_truth_file, "explicit truth partition file");
  trap->add_option("--mu-grid", mu_grid_spec, "lo:hi:step (default 0:1:0.1)");
  trap->add_option("--mu", mu_list, "explicit comma list of mu values");
  trap->add_option("--replicates", tcfg.replicates, "replicates per mu");
  trap->add_option("--metrics", trap_metrics,
                   "comma list (default nmi,ami1all,rrnmi; model all)");
  trap->add_option("--samples", tcfg.mc_samples, "Monte Carlo sample count");
  trap->add_option("--seed", trap_seed, "root seed");
  trap->add_option("--threads", trap_threads, "worker count (0 = env/default)");
  trap->add_option("-o,--output", trap_out, "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score->parsed())
      return cmd_score(file_c, file_t, metric_csv, sflags, score_json,
                       score_csv);
    if (expect->parsed())
      return cmd_expect(truth_file, candidate_file, eflags, expect_json,
                        expect_bits);
    if (verify->parsed()) return cmd_verify(vopt);
    if (trap->parsed()) {
      tcfg.seed = Seed{trap_seed, 0};
      tcfg.threads = trap_threads;
      if (!trap_truth_file.empty())
        tcfg.truth = load_partition_file(trap_truth_file);
      auto grid = parse_mu_grid(mu_grid_spec, mu_list);
      if (!grid.empty()) tcfg.mu_grid = grid;
      for (double mu : tcfg.mu_grid)
        if (!(mu >= 0.0 && mu <= 1.0))
          throw Error("mu values must lie in [0,1]");
      if (!trap_metrics.empty()) {
        const std::size_t n = tcfg.truth ? tcfg.truth->size() : tcfg.n;
        CommonFlags mflags;
        mflags.model = "all";
        mflags.samples = tcfg.mc_samples;
        mflags.seed = trap_seed ^ 0x5eedULL;
        std::vector<MetricRequest> reqs;
        for (MetricKind kind : parse_metric_list(trap_metrics)) {
          MetricRequest req;
          req.kind = kind;
          req.label = to_string(kind);
          req.config = build_config(mflags, kind, n);
          reqs.push_back(std::move(req));
        }
        tcfg.metrics = std::move(reqs);
      }
      return cmd_trap(tcfg, trap_out);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SizeMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSizeMismatch;
  } catch (const EnsembleTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
