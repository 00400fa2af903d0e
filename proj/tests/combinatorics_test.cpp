#include <doctest.h>

#include <map>
#include <set>

#include "partmetrics/combinatorics.hpp"
#include "testutil.hpp"

using namespace partmetrics;

TEST_CASE("bell numbers against the recursive enumeration oracle") {
  auto& ct = count_table();
  CHECK(ct.bell(0) == 1);
  CHECK(ct.bell(3) == 5);
  CHECK(ct.bell(4) == 15);
  for (std::size_t n = 1; n <= 8; ++n) {
    auto oracle = testutil::oracle_all_partitions(n);
    CHECK(ct.bell(n) == mpz_class(static_cast<unsigned long>(oracle.size())));
  }
}

TEST_CASE("stirling numbers against the enumeration-filter oracle") {
  auto& ct = count_table();
  for (std::size_t n = 1; n <= 8; ++n) {
    CHECK(ct.stirling2(n, n) == 1);
    CHECK(ct.stirling2(n, 1) == 1);
    CHECK(ct.stirling2(n, n + 1) == 0);
    auto oracle = testutil::oracle_all_partitions(n);
    std::map<std::size_t, unsigned long> by_k;
    for (const auto& m : oracle) ++by_k[testutil::oracle_block_count(m)];
    for (std::size_t k = 1; k <= n; ++k)
      CHECK(ct.stirling2(n, k) == mpz_class(by_k[k]));
  }
  CHECK(ct.stirling2(4, 2) == 7);
  CHECK(ct.stirling2(0, 0) == 1);
  CHECK(ct.stirling2(3, 0) == 0);
}

TEST_CASE("enumeration emits lexicographic RGS order, each exactly once") {
  SUBCASE("n=2") {
    auto parts = enumerate_partitions(2, EnumRestriction::all());
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == Partition::from_canonical({0, 0}));
    CHECK(parts[1] == Partition::from_canonical({0, 1}));
  }
  SUBCASE("matches the oracle order for n <= 6") {
    for (std::size_t n = 1; n <= 6; ++n) {
      auto parts = enumerate_partitions(n, EnumRestriction::all());
      auto oracle = testutil::oracle_all_partitions(n);
      REQUIRE(parts.size() == oracle.size());
      for (std::size_t i = 0; i < parts.size(); ++i) {
        std::vector<std::uint32_t> got(parts[i].membership().begin(),
                                       parts[i].membership().end());
        CHECK(got == oracle[i]);
      }
    }
  }
}

TEST_CASE("restricted enumeration") {
  SUBCASE("shape [2,2] has 3 distinct partitions") {
    auto parts = enumerate_partitions(4, EnumRestriction::by_shape(Shape({2, 2})));
    CHECK(parts.size() == 3);
  }
  SUBCASE("exactly-k counts match stirling2") {
    for (std::size_t n = 1; n <= 7; ++n)
      for (std::size_t k = 1; k <= n; ++k) {
        auto parts = enumerate_partitions(n, EnumRestriction::exactly_k(k));
        CHECK(mpz_class(static_cast<unsigned long>(parts.size())) ==
              count_table().stirling2(n, k));
      }
  }
  SUBCASE("totals match bell") {
    auto parts = enumerate_partitions(7, EnumRestriction::all());
    CHECK(mpz_class(static_cast<unsigned long>(parts.size())) ==
          count_table().bell(7));
  }
  SUBCASE("early stop") {
    std::size_t seen = 0;
    for_each_partition(6, EnumRestriction::all(), [&](const Partition&) {
      return ++seen < 10;
    });
    CHECK(seen == 10);
  }
}

TEST_CASE("enumeration cap guard") {
  CHECK_THROWS_AS(enumerate_partitions(13, EnumRestriction::all()),
                  EnsembleTooLargeError);
  CHECK_NOTHROW(for_each_partition(13, EnumRestriction::exactly_k(1),
                                   [](const Partition&) { return false; }, 13));
}

TEST_CASE("shape class sizes") {
  CHECK(shape_class_size(Shape({2, 2})) == 3);
  CHECK(shape_class_size(Shape({3, 1})) == 4);
  CHECK(shape_class_size(Shape({1, 1, 1})) == 1);
  CHECK(shape_class_size(Shape({5})) == 1);
  // sum over shapes of class sizes = Bell
  mpz_class total = 0;
  for (const auto& sh : testutil::oracle_shapes(7))
    total += shape_class_size(Shape(sh));
  CHECK(total == count_table().bell(7));
}

TEST_CASE("sampling is a pure function of (ensemble, seed)") {
  const Ensemble all8 = Ensemble::all(8);
  for (std::uint64_t s = 0; s < 10; ++s) {
    CHECK(sample_partition(all8, Seed{11, s}) == sample_partition(all8, Seed{11, s}));
  }
  // different streams almost surely differ somewhere
  bool any_diff = false;
  for (std::uint64_t s = 0; s < 6; ++s)
    any_diff |= !(sample_partition(all8, Seed{11, s}) ==
                  sample_partition(all8, Seed{11, s + 100}));
  CHECK(any_diff);
}

TEST_CASE("perm sampling preserves the reference shape") {
  Partition ref = Partition::from_canonical({0, 0, 0, 1, 1, 2, 3});
  const Ensemble ens = Ensemble::perm(ref.shape());
  for (std::uint64_t s = 0; s < 50; ++s)
    CHECK(sample_partition(ens, Seed{21, s}).shape() == ref.shape());
}

TEST_CASE("num sampling stays on its support") {
  const Ensemble ens = Ensemble::num(4, 2);
  auto support = enumerate_partitions(4, EnumRestriction::exactly_k(2));
  CHECK(support.size() == 7);
  std::set<std::vector<std::uint32_t>> seen;
  for (std::uint64_t s = 0; s < 400; ++s) {
    Partition p = sample_partition(ens, Seed{31, s});
    CHECK(p.block_count() == 2);
    seen.insert({p.membership().begin(), p.membership().end()});
  }
  CHECK(seen.size() == 7);  // all seven appear in 400 draws
}

TEST_CASE("containment order: smaller-model samples lie in the larger models") {
  Partition ref = Partition::from_canonical({0, 0, 1, 1, 2});
  const Ensemble perm = Ensemble::perm(ref.shape());
  const Ensemble num = Ensemble::num(5, ref.block_count());
  const Ensemble all = Ensemble::all(5);
  for (std::uint64_t s = 0; s < 60; ++s) {
    Partition p = sample_partition(perm, Seed{41, s});
    CHECK(num.contains(p));
    CHECK(all.contains(p));
    Partition q = sample_partition(num, Seed{42, s});
    CHECK(all.contains(q));
  }
}

TEST_CASE("uniformity sanity: chi-square at 0.001, n=4, all model") {
  const Ensemble ens = Ensemble::all(4);
  auto support = enumerate_partitions(4, EnumRestriction::all());
  REQUIRE(support.size() == 15);
  std::map<std::vector<std::uint32_t>, std::size_t> index;
  for (std::size_t i = 0; i < support.size(); ++i)
    index[{support[i].membership().begin(), support[i].membership().end()}] = i;
  std::vector<std::size_t> counts(support.size(), 0);
  const std::size_t draws = 15000;
  for (std::uint64_t s = 0; s < draws; ++s) {
    Partition p = sample_partition(ens, Seed{51, s});
    ++counts[index.at({p.membership().begin(), p.membership().end()})];
  }
  const double expected = double(draws) / double(support.size());
  double chi2 = 0;
  for (auto c : counts) {
    const double d = double(c) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < testutil::chi2_crit_999(support.size() - 1));
}

TEST_CASE("uniform_mpz_below stays in range and covers values") {
  Rng rng(Seed{61, 0});
  mpz_class bound("1000000000000000000000000");
  for (int i = 0; i < 200; ++i) {
    mpz_class r = uniform_mpz_below(rng, bound);
    CHECK(r >= 0);
    CHECK(r < bound);
  }
  std::set<unsigned long> seen;
  mpz_class small = 5;
  for (int i = 0; i < 200; ++i)
    seen.insert(uniform_mpz_below(rng, small).get_ui());
  CHECK(seen == std::set<unsigned long>{0, 1, 2, 3, 4});
}

TEST_CASE("relabeling multiplicity is constant across a class") {
  // |class| * multiplicity = n!
  Shape sh({3, 2, 2});
  mpz_class fact;
  mpz_fac_ui(fact.get_mpz_t(), 7);
  CHECK(shape_class_size(sh) * relabeling_multiplicity(sh) == fact);
}

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(Ensemble::num(3, 4), Error);
  CHECK_THROWS_AS(Ensemble::num(3, 0), Error);
  CHECK(Ensemble::all(5).cardinality() == 52);
  CHECK(Ensemble::num(4, 2).cardinality() == 7);
  CHECK(Ensemble::perm(Shape({2, 2})).cardinality() == 3);
}
