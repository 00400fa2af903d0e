#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "partmetrics/common.hpp"

namespace partmetrics {

// Multiset of block sizes of a partition, stored descending.
struct Shape {
  std::vector<std::uint32_t> sizes;

  Shape() = default;
  explicit Shape(std::vector<std::uint32_t> s);

  std::size_t n() const;
  std::size_t block_count() const { return sizes.size(); }
  bool operator==(const Shape&) const = default;
};

// A grouping of N elements into non-empty disjoint blocks. Membership is
// kept in restricted-growth (first-occurrence) normal form, so equal
// groupings compare equal as plain sequences and block ids are dense
// 0..k-1. Immutable after construction.
class Partition {
public:
  Partition() = default;

  // Canonicalizes arbitrary labels; raw may use any integers.
  static Partition from_membership(const std::vector<std::uint32_t>& raw);

  // Input must already be in restricted-growth form; throws otherwise.
  static Partition from_canonical(std::vector<std::uint32_t> membership);

  static Partition singletons(std::size_t n);
  static Partition one_block(std::size_t n);

  std::size_t size() const { return membership_.size(); }
  std::size_t block_count() const { return block_count_; }
  std::span<const std::uint32_t> membership() const { return membership_; }

  // Block sizes indexed by block id (not sorted).
  const std::vector<std::uint32_t>& block_sizes() const { return block_sizes_; }

  // Element sets per block, built on demand.
  std::vector<std::vector<std::uint32_t>> blocks() const;

  Shape shape() const;

  bool operator==(const Partition&) const = default;

private:
  std::vector<std::uint32_t> membership_;
  std::vector<std::uint32_t> block_sizes_;
  std::size_t block_count_ = 0;
};

// singletons / one-block partitions; throws on n == 0.
enum class TrivialKind { Singletons, OneBlock };
Partition trivial_partition(std::size_t n, TrivialKind kind);

// Block-overlap count matrix between two partitions on the same elements;
// the sufficient statistic for every metric in this library.
struct ContingencyTable {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t n = 0;
  std::vector<std::int64_t> counts;  // row-major
  std::vector<std::int64_t> row_margins;
  std::vector<std::int64_t> col_margins;

  std::int64_t at(std::size_t i, std::size_t j) const {
    return counts[i * cols + j];
  }
  ContingencyTable transpose() const;
};

// Throws SizeMismatchError when the partitions disagree on N.
ContingencyTable contingency(const Partition& c, const Partition& t);

// File formats: LabelsPerLine is one block label per node line ('#'
// comments and blank lines ignored); NodeTabLabel is "<node>\t<label>"
// with every node 0..N-1 appearing exactly once.
enum class PartitionFormat { LabelsPerLine, NodeTabLabel };

Partition parse_partition(std::istream& in, PartitionFormat format);
Partition parse_partition(const std::string& text, PartitionFormat format);

// Reads a file, sniffing the format (a tab anywhere selects NodeTabLabel).
Partition load_partition_file(const std::string& path);

// Emits LabelsPerLine with canonical integer labels.
void serialize_partition(const Partition& p, std::ostream& out);
std::string serialize_partition(const Partition& p);

}  // namespace partmetrics
