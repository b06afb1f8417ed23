#ifndef ISOFUSE_PARTITION_HPP
#define ISOFUSE_PARTITION_HPP

#include "isofuse/based_algebra.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isofuse {

using IndexSet = std::vector<int>;

class PartitionError : public std::invalid_argument
{
public:
  enum class Kind
  {
    overlap,
    out_of_range,
    incomplete_cover,
    empty_block,
    rank_mismatch,
    syntax,
  };

  PartitionError(Kind kind, const std::string& what)
  : std::invalid_argument(what), kind_(kind)
  {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

class Partition;
Partition normalize(std::vector<IndexSet> blocks, int rank);

/// Partition of {0..rank-1} in canonical form: every block sorted, blocks ordered
/// by their least element.
class Partition
{
public:
  int rank() const noexcept { return static_cast<int>(block_of_.size()); }
  std::size_t size() const noexcept { return blocks_.size(); }
  const std::vector<IndexSet>& blocks() const noexcept { return blocks_; }
  const IndexSet& block(std::size_t b) const { return blocks_[b]; }
  int block_of(int i) const { return block_of_[i]; }
  const std::vector<int>& labels() const noexcept { return block_of_; }

  bool is_discrete() const noexcept { return blocks_.size() == block_of_.size(); }
  bool has_block(std::span<const int> sorted_set) const
  {
    if (sorted_set.empty())
      return false;
    const auto& b = blocks_[block_of_[sorted_set.front()]];
    return std::equal(b.begin(), b.end(), sorted_set.begin(), sorted_set.end());
  }

  /// Builds the canonical partition whose block of i is labelled labels[i].
  static Partition from_labels(std::span<const int> labels)
  {
    Partition p;
    int n = static_cast<int>(labels.size());
    p.block_of_.assign(n, -1);
    std::map<int, int> renumber;
    for (int i = 0; i < n; ++i) {
      auto [it, inserted] = renumber.emplace(labels[i], static_cast<int>(p.blocks_.size()));
      if (inserted)
        p.blocks_.emplace_back();
      p.blocks_[it->second].push_back(i);
      p.block_of_[i] = it->second;
    }
    return p;
  }

  static Partition discrete(int rank)
  {
    std::vector<int> labels(rank);
    for (int i = 0; i < rank; ++i)
      labels[i] = i;
    return from_labels(labels);
  }

  std::uint64_t hash() const
  {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (int v : block_of_)
      h = hash_combine(h, static_cast<std::uint64_t>(v));
    return h;
  }

  friend bool operator==(const Partition& a, const Partition& b)
  {
    return a.block_of_ == b.block_of_;
  }
  friend bool operator<(const Partition& a, const Partition& b)
  {
    if (a.blocks_.size() != b.blocks_.size())
      return a.blocks_.size() < b.blocks_.size();
    return a.block_of_ < b.block_of_;
  }

private:
  friend Partition normalize(std::vector<IndexSet> blocks, int rank);

  std::vector<IndexSet> blocks_;
  std::vector<int> block_of_;
};

struct PartitionHash
{
  std::size_t operator()(const Partition& p) const { return static_cast<std::size_t>(p.hash()); }
};

inline Partition normalize(std::vector<IndexSet> blocks, int rank)
{
  if (rank <= 0)
    throw PartitionError(PartitionError::Kind::out_of_range, "partition rank must be positive");
  std::vector<int> owner(rank, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty())
      throw PartitionError(PartitionError::Kind::empty_block, "partition has an empty block");
    for (int i : blocks[b]) {
      if (i < 0 || i >= rank)
        throw PartitionError(PartitionError::Kind::out_of_range,
                             "index " + std::to_string(i) + " outside 0.." +
                               std::to_string(rank - 1));
      if (owner[i] >= 0)
        throw PartitionError(PartitionError::Kind::overlap,
                             "index " + std::to_string(i) + " occurs in two blocks");
      owner[i] = static_cast<int>(b);
    }
  }
  for (int i = 0; i < rank; ++i)
    if (owner[i] < 0)
      throw PartitionError(PartitionError::Kind::incomplete_cover,
                           "index " + std::to_string(i) + " is not covered by any block");
  return Partition::from_labels(owner);
}

inline void require_same_rank(const Partition& p, const Partition& q)
{
  if (p.rank() != q.rank())
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "partitions of ranks " + std::to_string(p.rank()) + " and " +
                           std::to_string(q.rank()));
}

/// Coarsest common refinement.
inline Partition meet(const Partition& p, const Partition& q)
{
  require_same_rank(p, q);
  int r = p.rank();
  std::vector<int> labels(r);
  std::map<std::pair<int, int>, int> ids;
  for (int i = 0; i < r; ++i) {
    auto key = std::make_pair(p.block_of(i), q.block_of(i));
    auto it = ids.emplace(key, static_cast<int>(ids.size())).first;
    labels[i] = it->second;
  }
  return Partition::from_labels(labels);
}

/// Setwise image of every block under a permutation of the index set.
inline Partition image(const Partition& p, std::span<const int> perm)
{
  if (static_cast<int>(perm.size()) != p.rank() || !is_permutation(perm))
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "permutation does not act on the partition's index set");
  std::vector<int> labels(p.rank());
  for (int i = 0; i < p.rank(); ++i)
    labels[perm[i]] = p.block_of(i);
  return Partition::from_labels(labels);
}

inline Partition star_image(const Partition& p, std::span<const int> star)
{
  if (!is_involution(star))
    throw PartitionError(PartitionError::Kind::rank_mismatch, "star is not an involution");
  return image(p, star);
}

/// True iff every block of p lies inside a block of q.
inline bool is_refinement(const Partition& p, const Partition& q)
{
  require_same_rank(p, q);
  for (const auto& b : p.blocks()) {
    int target = q.block_of(b.front());
    for (int i : b)
      if (q.block_of(i) != target)
        return false;
  }
  return true;
}

/// Disjoint nonempty index sets to be isolated; each set kept sorted, order as given.
class SeedFamily
{
public:
  SeedFamily() = default;

  SeedFamily(std::vector<IndexSet> sets, int rank)
  : sets_(std::move(sets))
  {
    std::vector<char> used(rank > 0 ? rank : 0, 0);
    for (auto& s : sets_) {
      if (s.empty())
        throw PartitionError(PartitionError::Kind::empty_block, "seed set is empty");
      std::sort(s.begin(), s.end());
      for (std::size_t t = 0; t < s.size(); ++t) {
        int i = s[t];
        if (i < 0 || i >= rank)
          throw PartitionError(PartitionError::Kind::out_of_range,
                               "seed index " + std::to_string(i) + " outside 0.." +
                                 std::to_string(rank - 1));
        if (used[i])
          throw PartitionError(PartitionError::Kind::overlap,
                               "seed index " + std::to_string(i) + " occurs twice");
        used[i] = 1;
      }
    }
  }

  const std::vector<IndexSet>& sets() const noexcept { return sets_; }
  std::size_t size() const noexcept { return sets_.size(); }
  bool empty() const noexcept { return sets_.empty(); }

  friend bool operator==(const SeedFamily&, const SeedFamily&) = default;

private:
  std::vector<IndexSet> sets_;
};

namespace detail {

inline std::vector<std::string> split(std::string_view text, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

inline std::string trim(std::string_view s)
{
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
    ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
    --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<IndexSet> parse_blocks(std::string_view text)
{
  std::vector<IndexSet> blocks;
  std::string body = trim(text);
  if (body.empty())
    throw PartitionError(PartitionError::Kind::syntax, "empty block list");
  for (const auto& part : split(body, ';')) {
    IndexSet block;
    std::string b = trim(part);
    if (b.empty())
      throw PartitionError(PartitionError::Kind::syntax, "empty block in '" + body + "'");
    for (const auto& tok : split(b, ',')) {
      std::string t = trim(tok);
      if (t.empty() || !std::all_of(t.begin(), t.end(),
                                    [](char c) { return c >= '0' && c <= '9'; }))
        throw PartitionError(PartitionError::Kind::syntax,
                             "malformed index '" + t + "' in '" + body + "'");
      if (t.size() > 9)
        throw PartitionError(PartitionError::Kind::out_of_range, "index '" + t + "' too large");
      block.push_back(std::stoi(t));
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

inline std::string format_set(const IndexSet& s)
{
  std::string out;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (t)
      out += ',';
    out += std::to_string(s[t]);
  }
  return out;
}

} // namespace detail

/// Parses `0;1,2,3;4,5`; the blocks must cover 0..rank-1 exactly.
inline Partition parse_partition(std::string_view text, int rank)
{
  return normalize(detail::parse_blocks(text), rank);
}

/// Parses `1,2;3` as the seed sets {1,2} and {3}.
inline SeedFamily parse_seed_family(std::string_view text, int rank)
{
  return SeedFamily(detail::parse_blocks(text), rank);
}

inline std::string to_string(const Partition& p)
{
  std::string out;
  for (std::size_t b = 0; b < p.size(); ++b) {
    if (b)
      out += ';';
    out += detail::format_set(p.block(b));
  }
  return out;
}

inline std::string to_string(const SeedFamily& f)
{
  std::string out;
  for (std::size_t s = 0; s < f.size(); ++s) {
    if (s)
      out += ';';
    out += detail::format_set(f.sets()[s]);
  }
  return out;
}

} // namespace isofuse

#endif // ISOFUSE_PARTITION_HPP
