#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "partmetrics/sweep.hpp"

using namespace partmetrics;

TEST_CASE("degrade") {
  Partition truth = balanced_partition(100, 10);

  SUBCASE("mu = 0 is the identity") {
    CHECK(degrade(truth, 0.0, Seed{1, 0}) == truth);
  }
  SUBCASE("exactly round(mu*N) nodes move, each to a different block") {
    for (double mu : {0.1, 0.25, 0.5, 0.77}) {
      auto mem = degrade_membership(truth, mu, Seed{2, 7});
      std::size_t moved = 0;
      for (std::size_t i = 0; i < mem.size(); ++i) {
        if (mem[i] != truth.membership()[i]) ++moved;
        CHECK(mem[i] < truth.block_count());
      }
      CHECK(moved == std::size_t(std::llround(mu * 100.0)));
    }
  }
  SUBCASE("mu = 1 moves every node") {
    auto mem = degrade_membership(truth, 1.0, Seed{3, 0});
    for (std::size_t i = 0; i < mem.size(); ++i)
      CHECK(mem[i] != truth.membership()[i]);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(degrade(truth, -0.1, Seed{4, 0}), Error);
    CHECK_THROWS_AS(degrade(truth, 1.1, Seed{4, 0}), Error);
    CHECK_THROWS_AS(degrade(Partition::one_block(10), 0.5, Seed{4, 0}), Error);
    CHECK_NOTHROW(degrade(Partition::one_block(10), 0.0, Seed{4, 0}));
  }
  SUBCASE("deterministic per seed") {
    CHECK(degrade(truth, 0.4, Seed{5, 1}) == degrade(truth, 0.4, Seed{5, 1}));
  }
}

TEST_CASE("balanced partition shapes") {
  CHECK(balanced_partition(100, 10).shape().sizes ==
        std::vector<std::uint32_t>(10, 10));
  CHECK(balanced_partition(7, 3).shape().sizes ==
        std::vector<std::uint32_t>{3, 2, 2});
  CHECK_THROWS_AS(balanced_partition(3, 0), Error);
  CHECK_THROWS_AS(balanced_partition(3, 4), Error);
}

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.n = 30;
  cfg.k = 5;
  cfg.mu_grid = {0.0, 0.5, 1.0};
  cfg.replicates = 2;
  cfg.mc_samples = 500;
  cfg.seed = Seed{11, 0};
  return cfg;
}

std::string csv_of(const SweepConfig& cfg) {
  std::ostringstream out;
  write_sweep_csv(out, run_trap_sweep(cfg));
  return out.str();
}

}  // namespace

TEST_CASE("trap sweep rows and schema") {
  SweepConfig cfg = small_config();
  auto rows = run_trap_sweep(cfg);
  // 3 mu x 2 replicates x 3 guesses x 3 default metrics
  CHECK(rows.size() == 3 * 2 * 3 * 3);

  std::ostringstream out;
  write_sweep_csv(out, rows);
  const std::string csv = out.str();
  CHECK(csv.rfind("mu,replicate,guess,metric,score,stderr\n", 0) == 0);

  std::set<std::string> guesses, metrics;
  for (const auto& r : rows) {
    guesses.insert(r.guess);
    metrics.insert(r.metric);
  }
  CHECK(guesses == std::set<std::string>{"degraded", "singletons", "one-block"});
  CHECK(metrics == std::set<std::string>{"nmi", "ami1all", "rrnmi"});
}

TEST_CASE("mu = 0 scores 1 for nmi and the self-truth-bounded rrnmi") {
  auto rows = run_trap_sweep(small_config());
  for (const auto& r : rows) {
    if (r.mu != 0.0 || r.guess != "degraded") continue;
    if (r.metric == "nmi" || r.metric == "rrnmi")
      CHECK(r.score == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("sweep output is byte-identical across reruns and thread counts") {
  SweepConfig cfg = small_config();
  const std::string once = csv_of(cfg);
  const std::string twice = csv_of(cfg);
  CHECK(once == twice);

  SweepConfig threaded = cfg;
  threaded.threads = 4;
  CHECK(csv_of(threaded) == once);
}

TEST_CASE("explicit truth override") {
  SweepConfig cfg = small_config();
  cfg.truth = balanced_partition(12, 3);
  cfg.mu_grid = {0.0};
  cfg.replicates = 1;
  cfg.mc_samples = 200;
  auto rows = run_trap_sweep(cfg);
  REQUIRE(!rows.empty());
  for (const auto& r : rows)
    if (r.guess == "degraded" && r.metric == "nmi") CHECK(r.score == 1.0);
}

TEST_CASE("monotonicity diagnostic produces no warnings on a sane sweep") {
  SweepConfig cfg = small_config();
  cfg.replicates = 3;
  auto rows = run_trap_sweep(cfg);
  auto warnings = monotonicity_warnings(cfg, rows);
  CHECK(warnings.empty());
}
