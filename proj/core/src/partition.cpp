#include "partmetrics/partition.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>

namespace partmetrics {

Shape::Shape(std::vector<std::uint32_t> s) : sizes(std::move(s)) {
  for (auto v : sizes)
    if (v == 0) throw Error("shape sizes must be positive");
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
}

std::size_t Shape::n() const {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

Partition Partition::from_membership(const std::vector<std::uint32_t>& raw) {
  std::vector<std::uint32_t> mem(raw.size());
  std::unordered_map<std::uint32_t, std::uint32_t> relabel;
  relabel.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] =
        relabel.try_emplace(raw[i], std::uint32_t(relabel.size()));
    mem[i] = it->second;
  }
  return from_canonical(std::move(mem));
}

Partition Partition::from_canonical(std::vector<std::uint32_t> membership) {
  Partition p;
  std::uint32_t next = 0;
  for (auto v : membership) {
    if (v > next) throw Error("membership is not in restricted-growth form");
    if (v == next) ++next;
  }
  p.block_count_ = next;
  p.block_sizes_.assign(next, 0);
  for (auto v : membership) ++p.block_sizes_[v];
  p.membership_ = std::move(membership);
  return p;
}

Partition Partition::singletons(std::size_t n) {
  std::vector<std::uint32_t> mem(n);
  std::iota(mem.begin(), mem.end(), 0);
  return from_canonical(std::move(mem));
}

Partition Partition::one_block(std::size_t n) {
  return from_canonical(std::vector<std::uint32_t>(n, 0));
}

std::vector<std::vector<std::uint32_t>> Partition::blocks() const {
  std::vector<std::vector<std::uint32_t>> out(block_count_);
  for (std::size_t b = 0; b < block_count_; ++b)
    out[b].reserve(block_sizes_[b]);
  for (std::uint32_t i = 0; i < membership_.size(); ++i)
    out[membership_[i]].push_back(i);
  return out;
}

Shape Partition::shape() const { return Shape(block_sizes_); }

Partition trivial_partition(std::size_t n, TrivialKind kind) {
  if (n == 0) throw Error("trivial partition requires n >= 1");
  return kind == TrivialKind::Singletons ? Partition::singletons(n)
                                         : Partition::one_block(n);
}

ContingencyTable ContingencyTable::transpose() const {
  ContingencyTable t;
  t.rows = cols;
  t.cols = rows;
  t.n = n;
  t.counts.resize(counts.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      t.counts[j * rows + i] = counts[i * cols + j];
  t.row_margins = col_margins;
  t.col_margins = row_margins;
  return t;
}

ContingencyTable contingency(const Partition& c, const Partition& t) {
  if (c.size() != t.size())
    throw SizeMismatchError("partitions cover different element counts: " +
                            std::to_string(c.size()) + " vs " +
                            std::to_string(t.size()));
  ContingencyTable ct;
  ct.rows = c.block_count();
  ct.cols = t.block_count();
  ct.n = c.size();
  ct.counts.assign(ct.rows * ct.cols, 0);
  auto cm = c.membership();
  auto tm = t.membership();
  for (std::size_t i = 0; i < ct.n; ++i)
    ++ct.counts[cm[i] * ct.cols + tm[i]];
  ct.row_margins.assign(c.block_sizes().begin(), c.block_sizes().end());
  ct.col_margins.assign(t.block_sizes().begin(), t.block_sizes().end());
  return ct;
}

namespace {

bool is_blank_or_comment(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

Partition parse_partition(std::istream& in, PartitionFormat format) {
  std::string line;
  std::size_t lineno = 0;

  if (format == PartitionFormat::LabelsPerLine) {
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
      ++lineno;
      if (is_blank_or_comment(line)) continue;
      labels.push_back(trim(line));
    }
    if (labels.empty()) throw ParseError("empty partition input");
    std::vector<std::uint32_t> mem(labels.size());
    std::unordered_map<std::string, std::uint32_t> ids;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      auto [it, ins] = ids.try_emplace(labels[i], std::uint32_t(ids.size()));
      mem[i] = it->second;
    }
    return Partition::from_canonical(std::move(mem));
  }

  // NodeTabLabel
  std::vector<std::pair<std::size_t, std::string>> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError("expected <node>\\t<label>", lineno);
    std::string node_text = trim(line.substr(0, tab));
    std::string label = trim(line.substr(tab + 1));
    if (label.empty()) throw ParseError("empty label", lineno);
    std::size_t node = 0;
    try {
      std::size_t pos = 0;
      node = std::stoull(node_text, &pos);
      if (pos != node_text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw ParseError("bad node index '" + node_text + "'", lineno);
    }
    entries.emplace_back(node, std::move(label));
  }
  if (entries.empty()) throw ParseError("empty partition input");

  const std::size_t n = entries.size();
  std::vector<std::string> by_node(n);
  std::vector<bool> seen(n, false);
  for (auto& [node, label] : entries) {
    if (node >= n)
      throw ParseError("node index " + std::to_string(node) +
                       " out of range for N=" + std::to_string(n));
    if (seen[node])
      throw ParseError("duplicate node index " + std::to_string(node));
    seen[node] = true;
    by_node[node] = std::move(label);
  }
  // every index 0..N-1 seen exactly once by pigeonhole at this point

  std::vector<std::uint32_t> mem(n);
  std::unordered_map<std::string, std::uint32_t> ids;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, ins] = ids.try_emplace(by_node[i], std::uint32_t(ids.size()));
    mem[i] = it->second;
  }
  return Partition::from_canonical(std::move(mem));
}

Partition parse_partition(const std::string& text, PartitionFormat format) {
  std::istringstream in(text);
  return parse_partition(in, format);
}

Partition load_partition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto format = text.find('\t') == std::string::npos
                    ? PartitionFormat::LabelsPerLine
                    : PartitionFormat::NodeTabLabel;
  return parse_partition(text, format);
}

void serialize_partition(const Partition& p, std::ostream& out) {
  for (auto v : p.membership()) out << v << '\n';
}

std::string serialize_partition(const Partition& p) {
  std::ostringstream out;
  serialize_partition(p, out);
  return out.str();
}

}  // namespace partmetrics
