#include <doctest.h>

#include <sstream>

#include "partmetrics/combinatorics.hpp"
#include "partmetrics/partition.hpp"
#include "testutil.hpp"

using namespace partmetrics;

TEST_CASE("labels-per-line parsing canonicalizes by first occurrence") {
  Partition p = parse_partition("a\na\nb\n", PartitionFormat::LabelsPerLine);
  CHECK(p.membership()[0] == 0);
  CHECK(p.membership()[1] == 0);
  CHECK(p.membership()[2] == 1);
  CHECK(p.block_count() == 2);
}

TEST_CASE("node-tab-label parsing") {
  Partition p = parse_partition("0\tx\n1\tx\n2\ty\n3\ty\n",
                                PartitionFormat::NodeTabLabel);
  std::vector<std::uint32_t> want{0, 0, 1, 1};
  CHECK(std::vector<std::uint32_t>(p.membership().begin(),
                                   p.membership().end()) == want);

  // order of lines is immaterial, indices bind labels to nodes
  Partition q = parse_partition("3\ty\n1\tx\n0\tx\n2\ty\n",
                                PartitionFormat::NodeTabLabel);
  CHECK(p == q);
}

TEST_CASE("label names are immaterial") {
  Partition a = parse_partition("a\nb\na\nb\n", PartitionFormat::LabelsPerLine);
  Partition b = parse_partition("p\nq\np\nq\n", PartitionFormat::LabelsPerLine);
  CHECK(a == b);
}

TEST_CASE("comments and blanks are ignored") {
  Partition p = parse_partition("# truth\n\na\n a \nb\n",
                                PartitionFormat::LabelsPerLine);
  CHECK(p.size() == 3);
  CHECK(p.block_count() == 2);
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_partition("", PartitionFormat::LabelsPerLine), ParseError);
  CHECK_THROWS_AS(parse_partition("# only\n", PartitionFormat::LabelsPerLine),
                  ParseError);
  CHECK_THROWS_AS(
      parse_partition("0\tx\n0\ty\n", PartitionFormat::NodeTabLabel), ParseError);
  CHECK_THROWS_AS(
      parse_partition("0\tx\n2\ty\n", PartitionFormat::NodeTabLabel), ParseError);
  CHECK_THROWS_AS(parse_partition("0\tx\n1 y\n", PartitionFormat::NodeTabLabel),
                  ParseError);
  // malformed line reports its number
  try {
    parse_partition("0\tx\n1 y\n", PartitionFormat::NodeTabLabel);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("parse -> serialize -> parse is identity on canonical form") {
  for (std::uint64_t s = 0; s < 40; ++s) {
    Partition p = sample_partition(Ensemble::all(9), Seed{99, s});
    std::string text = serialize_partition(p);
    Partition q = parse_partition(text, PartitionFormat::LabelsPerLine);
    CHECK(p == q);
  }
}

TEST_CASE("shape extraction") {
  CHECK(Partition::from_canonical({0, 0, 1, 1}).shape().sizes ==
        std::vector<std::uint32_t>{2, 2});
  CHECK(Partition::from_canonical({0, 1, 2, 3}).shape().sizes ==
        std::vector<std::uint32_t>{1, 1, 1, 1});
  CHECK(Partition::from_canonical({0, 0, 0, 1}).shape().sizes ==
        std::vector<std::uint32_t>{3, 1});
}

TEST_CASE("shape is invariant under block relabeling") {
  // same grouping expressed with scrambled raw labels
  Partition a = Partition::from_membership({7, 7, 3, 3, 9});
  Partition b = Partition::from_membership({0, 0, 1, 1, 2});
  CHECK(a == b);
  CHECK(a.shape() == b.shape());
}

TEST_CASE("contingency tables") {
  Partition t = Partition::from_canonical({0, 0, 1, 1});
  SUBCASE("diagonal at identity") {
    auto ct = contingency(t, t);
    CHECK(ct.at(0, 0) == 2);
    CHECK(ct.at(0, 1) == 0);
    CHECK(ct.at(1, 0) == 0);
    CHECK(ct.at(1, 1) == 2);
  }
  SUBCASE("singleton rows") {
    auto ct = contingency(Partition::singletons(4), t);
    CHECK(ct.rows == 4);
    CHECK(ct.cols == 2);
    CHECK(ct.at(0, 0) == 1);
    CHECK(ct.at(3, 1) == 1);
    CHECK(ct.at(0, 1) == 0);
  }
  SUBCASE("crossing blocks") {
    auto ct = contingency(t, Partition::from_canonical({0, 1, 0, 1}));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(ct.at(i, j) == 1);
  }
  SUBCASE("margins match block sizes and sum to n") {
    auto ct = contingency(Partition::from_canonical({0, 1, 0, 2}), t);
    CHECK(ct.row_margins == std::vector<std::int64_t>{2, 1, 1});
    CHECK(ct.col_margins == std::vector<std::int64_t>{2, 2});
    std::int64_t total = 0;
    for (auto v : ct.counts) total += v;
    CHECK(total == 4);
  }
  SUBCASE("size mismatch throws") {
    CHECK_THROWS_AS(contingency(Partition::singletons(3), t), SizeMismatchError);
  }
}

TEST_CASE("contingency(c,t) is the transpose of contingency(t,c)") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    Partition c = sample_partition(Ensemble::all(8), Seed{5, 2 * s});
    Partition t = sample_partition(Ensemble::all(8), Seed{5, 2 * s + 1});
    auto ab = contingency(c, t);
    auto ba = contingency(t, c).transpose();
    CHECK(ab.counts == ba.counts);
    CHECK(ab.row_margins == ba.row_margins);
  }
}

TEST_CASE("trivial partitions") {
  CHECK(trivial_partition(3, TrivialKind::Singletons) == Partition::from_canonical({0, 1, 2}));
  CHECK(trivial_partition(3, TrivialKind::OneBlock) == Partition::from_canonical({0, 0, 0}));
  CHECK(trivial_partition(1, TrivialKind::Singletons) ==
        trivial_partition(1, TrivialKind::OneBlock));
  CHECK_THROWS_AS(trivial_partition(0, TrivialKind::Singletons), Error);
}

TEST_CASE("from_canonical rejects non-RGS input") {
  CHECK_THROWS_AS(Partition::from_canonical({1, 0}), Error);
  CHECK_THROWS_AS(Partition::from_canonical({0, 2}), Error);
}

TEST_CASE("blocks() partitions the universe") {
  Partition p = Partition::from_canonical({0, 1, 0, 2, 1});
  auto blocks = p.blocks();
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0] == std::vector<std::uint32_t>{0, 2});
  CHECK(blocks[1] == std::vector<std::uint32_t>{1, 4});
  CHECK(blocks[2] == std::vector<std::uint32_t>{3});
}
