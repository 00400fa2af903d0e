#include "partmetrics/combinatorics.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace partmetrics {

std::size_t enumeration_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("PARTMETRICS_ENUM_CAP")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end && *end == '\0' && v >= 1) return std::size_t(v);
    }
    return std::size_t(12);
  }();
  return cap;
}

unsigned worker_threads() {
  static const unsigned t = [] {
    if (const char* env = std::getenv("PARTMETRICS_THREADS")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end && *end == '\0' && v >= 1 && v <= 1024) return unsigned(v);
    }
    return 1u;
  }();
  return t;
}

void CountTable::ensure(std::size_t n) {
  std::lock_guard<std::mutex> lock(mu_);
  grow_locked(n);
}

void CountTable::grow_locked(std::size_t n) {
  std::size_t built = built_.load(std::memory_order_relaxed);
  while (built <= n) {
    const std::size_t m = built;
    std::vector<mpz_class> row(m + 1);
    if (m == 0) {
      row[0] = 1;  // S(0,0) = 1
    } else {
      row[0] = 0;
      for (std::size_t k = 1; k <= m; ++k) {
        // S(m,k) = k*S(m-1,k) + S(m-1,k-1); S(m-1,m) = 0
        row[k] = stirling_[m - 1][k - 1];
        if (k < m) row[k] += mpz_class(k) * stirling_[m - 1][k];
      }
    }
    mpz_class b = 0;
    for (const auto& v : row) b += v;
    stirling_.push_back(std::move(row));
    bell_.push_back(std::move(b));
    built_.store(++built, std::memory_order_release);
  }
}

const mpz_class& CountTable::bell(std::size_t n) {
  if (n >= built_.load(std::memory_order_acquire)) ensure(n);
  return bell_[n];
}

const mpz_class& CountTable::stirling2(std::size_t n, std::size_t k) {
  if (k > n) return zero_;
  if (n >= built_.load(std::memory_order_acquire)) ensure(n);
  return stirling_[n][k];
}

CountTable& count_table() {
  static CountTable table;
  return table;
}

namespace {

mpz_class factorial(std::size_t n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

}  // namespace

mpz_class relabeling_multiplicity(const Shape& shape) {
  mpz_class m = 1;
  std::map<std::uint32_t, std::size_t> mult;
  for (auto s : shape.sizes) {
    m *= factorial(s);
    ++mult[s];
  }
  for (auto& [size, count] : mult) m *= factorial(count);
  return m;
}

mpz_class shape_class_size(const Shape& shape) {
  mpz_class c = factorial(shape.n());
  mpz_class m = relabeling_multiplicity(shape);
  return c / m;
}

std::string to_string(RandomModel m) {
  switch (m) {
    case RandomModel::All: return "all";
    case RandomModel::Num: return "num";
    case RandomModel::Perm: return "perm";
  }
  return "?";
}

std::optional<RandomModel> random_model_from_string(const std::string& s) {
  if (s == "all") return RandomModel::All;
  if (s == "num") return RandomModel::Num;
  if (s == "perm") return RandomModel::Perm;
  return std::nullopt;
}

Ensemble Ensemble::all(std::size_t n) {
  Ensemble e;
  e.model = RandomModel::All;
  e.n = n;
  return e;
}

Ensemble Ensemble::num(std::size_t n, std::size_t k) {
  if (k > n || (k == 0 && n > 0))
    throw Error("M_num requires 1 <= k <= n");
  Ensemble e;
  e.model = RandomModel::Num;
  e.n = n;
  e.num_blocks = k;
  return e;
}

Ensemble Ensemble::perm(Shape shape) {
  Ensemble e;
  e.model = RandomModel::Perm;
  e.n = shape.n();
  e.shape = std::move(shape);
  return e;
}

Ensemble Ensemble::anchored(RandomModel model, const Partition& p) {
  switch (model) {
    case RandomModel::All: return all(p.size());
    case RandomModel::Num: return num(p.size(), p.block_count());
    case RandomModel::Perm: return perm(p.shape());
  }
  throw Error("bad random model");
}

mpz_class Ensemble::cardinality() const {
  switch (model) {
    case RandomModel::All: return count_table().bell(n);
    case RandomModel::Num: return count_table().stirling2(n, num_blocks);
    case RandomModel::Perm: return shape_class_size(shape);
  }
  throw Error("bad random model");
}

bool Ensemble::contains(const Partition& p) const {
  if (p.size() != n) return false;
  switch (model) {
    case RandomModel::All: return true;
    case RandomModel::Num: return p.block_count() == num_blocks;
    case RandomModel::Perm: return p.shape() == shape;
  }
  return false;
}

std::string Ensemble::key() const {
  std::string k = to_string(model) + ":" + std::to_string(n);
  if (model == RandomModel::Num) k += ":" + std::to_string(num_blocks);
  if (model == RandomModel::Perm) {
    k += ":";
    for (auto s : shape.sizes) k += std::to_string(s) + ",";
  }
  return k;
}

EnumRestriction EnumRestriction::exactly_k(std::size_t k) {
  EnumRestriction r;
  r.kind = Kind::ExactlyK;
  r.k = k;
  return r;
}

EnumRestriction EnumRestriction::by_shape(Shape s) {
  EnumRestriction r;
  r.kind = Kind::ByShape;
  r.shape = std::move(s);
  return r;
}

EnumRestriction EnumRestriction::of(const Ensemble& e) {
  switch (e.model) {
    case RandomModel::All: return all();
    case RandomModel::Num: return exactly_k(e.num_blocks);
    case RandomModel::Perm: return by_shape(e.shape);
  }
  return all();
}

void for_each_partition(std::size_t n, const EnumRestriction& restriction,
                        const std::function<bool(const Partition&)>& visit,
                        std::optional<std::size_t> cap) {
  if (n == 0) throw Error("enumeration requires n >= 1");
  const std::size_t limit = cap.value_or(enumeration_cap());
  if (n > limit)
    throw EnsembleTooLargeError(
        "ensemble too large: n=" + std::to_string(n) +
        " exceeds enumeration cap " + std::to_string(limit));
  if (restriction.kind == EnumRestriction::Kind::ByShape &&
      restriction.shape.n() != n)
    throw Error("shape restriction must sum to n");

  // Iterate restricted-growth strings in lexicographic order:
  // a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
  std::vector<std::uint32_t> a(n, 0);
  const auto matches = [&](const Partition& p) {
    switch (restriction.kind) {
      case EnumRestriction::Kind::All: return true;
      case EnumRestriction::Kind::ExactlyK:
        return p.block_count() == restriction.k;
      case EnumRestriction::Kind::ByShape:
        return p.shape() == restriction.shape;
    }
    return true;
  };
  const auto advance = [&]() -> bool {
    for (std::size_t i = n - 1; i >= 1; --i) {
      std::uint32_t mx = 0;
      for (std::size_t j = 0; j < i; ++j) mx = std::max(mx, a[j]);
      if (a[i] <= mx) {
        ++a[i];
        std::fill(a.begin() + i + 1, a.end(), 0);
        return true;
      }
    }
    return false;
  };

  do {
    Partition p = Partition::from_canonical(a);
    if (matches(p) && !visit(p)) return;
  } while (n > 1 && advance());
}

std::vector<Partition> enumerate_partitions(std::size_t n,
                                            const EnumRestriction& restriction,
                                            std::optional<std::size_t> cap) {
  std::vector<Partition> out;
  for_each_partition(
      n, restriction,
      [&](const Partition& p) {
        out.push_back(p);
        return true;
      },
      cap);
  return out;
}

mpz_class uniform_mpz_below(Rng& rng, const mpz_class& bound) {
  if (bound <= 0) throw Error("uniform_mpz_below: bound must be positive");
  const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  const unsigned top_bits = bits % 64 == 0 ? 64 : unsigned(bits % 64);
  const std::uint64_t top_mask =
      top_bits == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << top_bits) - 1);
  std::vector<std::uint64_t> buf(words);
  mpz_class r;
  while (true) {
    for (auto& w : buf) w = rng.next_u64();
    buf[words - 1] &= top_mask;
    mpz_import(r.get_mpz_t(), words, -1 /*LSW first*/, sizeof(std::uint64_t),
               0 /*native endian*/, 0, buf.data());
    if (r < bound) return r;
  }
}

namespace {

// Uniform partition of n into exactly k blocks via the Stirling
// recursion: element m either starts a new block, counted by S(m-1,k-1),
// or joins one of the k blocks of a partition counted by k*S(m-1,k).
Partition sample_num_blocks(std::size_t n, std::size_t k, Rng& rng) {
  auto& ct = count_table();
  ct.ensure(n);

  // decisions recorded from element n-1 down to 0
  struct Decision {
    bool fresh;
    std::size_t block;  // valid when !fresh
  };
  std::vector<Decision> dec(n);
  std::size_t m = n, j = k;
  while (m > 0) {
    const mpz_class& total = ct.stirling2(m, j);
    mpz_class r = uniform_mpz_below(rng, total);
    const mpz_class& fresh_weight = ct.stirling2(m - 1, j - 1);
    if (r < fresh_weight) {
      dec[m - 1] = {true, 0};
      --j;
    } else {
      r -= fresh_weight;
      mpz_class q = r / ct.stirling2(m - 1, j);  // uniform in [0, j)
      dec[m - 1] = {false, q.get_ui()};
    }
    --m;
  }

  // replay ascending: blocks indexed in creation (= first occurrence) order
  std::vector<std::uint32_t> mem(n);
  std::uint32_t blocks = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (dec[i].fresh)
      mem[i] = blocks++;
    else
      mem[i] = std::uint32_t(dec[i].block);
  }
  return Partition::from_canonical(std::move(mem));
}

Partition sample_all(std::size_t n, Rng& rng) {
  auto& ct = count_table();
  ct.ensure(n);
  mpz_class r = uniform_mpz_below(rng, ct.bell(n));
  std::size_t k = 0;
  for (std::size_t kk = 0; kk <= n; ++kk) {
    const mpz_class& s = ct.stirling2(n, kk);
    if (r < s) {
      k = kk;
      break;
    }
    r -= s;
  }
  return sample_num_blocks(n, k, rng);
}

Partition sample_perm(const Shape& shape, Rng& rng) {
  const std::size_t n = shape.n();
  // reference membership for the shape, then a uniform permutation of
  // element positions, then canonicalize
  std::vector<std::uint32_t> ref;
  ref.reserve(n);
  for (std::uint32_t b = 0; b < shape.sizes.size(); ++b)
    ref.insert(ref.end(), shape.sizes[b], b);

  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = std::size_t(rng.next_below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  std::vector<std::uint32_t> mem(n);
  for (std::size_t i = 0; i < n; ++i) mem[perm[i]] = ref[i];
  return Partition::from_membership(mem);
}

}  // namespace

Partition sample_partition_with(const Ensemble& ensemble, Rng& rng) {
  if (ensemble.n == 0) throw Error("cannot sample partitions of 0 elements");
  switch (ensemble.model) {
    case RandomModel::All: return sample_all(ensemble.n, rng);
    case RandomModel::Num:
      return sample_num_blocks(ensemble.n, ensemble.num_blocks, rng);
    case RandomModel::Perm: return sample_perm(ensemble.shape, rng);
  }
  throw Error("bad random model");
}

Partition sample_partition(const Ensemble& ensemble, Seed seed) {
  Rng rng(seed);
  return sample_partition_with(ensemble, rng);
}

}  // namespace partmetrics
