#pragma once

#include <gmpxx.h>

#include <atomic>
#include <deque>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "partmetrics/partition.hpp"
#include "partmetrics/rng.hpp"

namespace partmetrics {

// Memoized Bell and Stirling-second-kind numbers, exact arbitrary
// precision. Grow with ensure(); afterwards reads are lock-free and the
// returned references stay valid (rows live in deques).
class CountTable {
public:
  void ensure(std::size_t n);

  // Number of set partitions of n elements.
  const mpz_class& bell(std::size_t n);

  // Partitions of n elements into exactly k non-empty blocks;
  // 0 when k > n or (k == 0, n > 0).
  const mpz_class& stirling2(std::size_t n, std::size_t k);

private:
  void grow_locked(std::size_t n);

  std::mutex mu_;
  std::deque<std::vector<mpz_class>> stirling_;  // stirling_[n][k], k <= n
  std::deque<mpz_class> bell_;
  std::atomic<std::size_t> built_ = 0;  // rows 0..built_-1 are ready
  mpz_class zero_ = 0;
};

// Shared process-wide table.
CountTable& count_table();

// n! / (prod sizes! * prod multiplicity(size)!): the number of distinct
// partitions with the given shape.
mpz_class shape_class_size(const Shape& shape);

// prod sizes! * prod multiplicity(size)!: how many of the n! relabelings
// of a partition reproduce any one fixed partition of the same shape.
// Constant across the class, so uniform-over-relabelings equals
// uniform-over-distinct-partitions.
mpz_class relabeling_multiplicity(const Shape& shape);

// The three uniform random models, instantiated on concrete parameters.
enum class RandomModel { All, Num, Perm };

std::string to_string(RandomModel m);
std::optional<RandomModel> random_model_from_string(const std::string& s);

// A concrete uniform ensemble of partitions of n elements.
struct Ensemble {
  RandomModel model = RandomModel::All;
  std::size_t n = 0;
  std::size_t num_blocks = 0;  // Num only
  Shape shape;                 // Perm only

  static Ensemble all(std::size_t n);
  static Ensemble num(std::size_t n, std::size_t k);
  static Ensemble perm(Shape shape);

  // model(p): the ensemble anchored at a partition, per the containment
  // definitions (All ignores p; Num fixes |p|; Perm fixes shape(p)).
  static Ensemble anchored(RandomModel model, const Partition& p);

  mpz_class cardinality() const;
  bool contains(const Partition& p) const;

  // Stable identifier, used as a cache-key component.
  std::string key() const;
};

// Restriction for exhaustive enumeration.
struct EnumRestriction {
  enum class Kind { All, ExactlyK, ByShape } kind = Kind::All;
  std::size_t k = 0;
  Shape shape;

  static EnumRestriction all() { return {}; }
  static EnumRestriction exactly_k(std::size_t k);
  static EnumRestriction by_shape(Shape s);
  static EnumRestriction of(const Ensemble& e);
};

// Visits every distinct partition of the restricted ensemble exactly once,
// in lexicographic restricted-growth-string order. The visitor returns
// false to stop early. Throws EnsembleTooLargeError when n exceeds the
// cap (default enumeration_cap(), override per call).
void for_each_partition(std::size_t n, const EnumRestriction& restriction,
                        const std::function<bool(const Partition&)>& visit,
                        std::optional<std::size_t> cap = std::nullopt);

// Materialized form of the above.
std::vector<Partition> enumerate_partitions(
    std::size_t n, const EnumRestriction& restriction,
    std::optional<std::size_t> cap = std::nullopt);

// One partition distributed uniformly over the ensemble; a pure function
// of (ensemble, seed).
Partition sample_partition(const Ensemble& ensemble, Seed seed);

// As above, drawing from an already-positioned generator (for callers
// that take several draws per stream).
Partition sample_partition_with(const Ensemble& ensemble, Rng& rng);

// Uniform mpz in [0, bound); bound must be positive.
mpz_class uniform_mpz_below(Rng& rng, const mpz_class& bound);

}  // namespace partmetrics
