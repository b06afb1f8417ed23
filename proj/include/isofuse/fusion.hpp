#ifndef ISOFUSE_FUSION_HPP
#define ISOFUSE_FUSION_HPP

// Minimal isolating semifusions and fusions of a based algebra.
//
// A partition P of the basis is a semifusion iff for every ordered pair of
// blocks (I, J) the fused coefficient sum_{i in I, j in J} lambda_{ijk} is
// constant as k ranges over each block K. The engine starts from the seed
// sets, the remaining identity indices and the remaining non-identity
// indices, and splits every block by the full vector of fused coefficients
// (the "signature") of its members until nothing changes. The fixed point is
// the coarsest semifusion refining the start partition, so either every seed
// survives as a block or no isolating semifusion exists.

#include "isofuse/based_algebra.hpp"
#include "isofuse/partition.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace isofuse {

enum class FusionStatus
{
  fusion,
  semifusion,
  failed,
  relaxed,
};

inline const char* to_string(FusionStatus s)
{
  switch (s) {
    case FusionStatus::fusion: return "fusion";
    case FusionStatus::semifusion: return "semifusion";
    case FusionStatus::failed: return "failed";
    case FusionStatus::relaxed: return "relaxed";
  }
  return "unknown";
}

/// Why a protected set could not be kept as a block.
struct SeedViolation
{
  IndexSet seed;
  // b_left * b_right has coefficient first_value at `first` but second_value at
  // `second`, both inside `seed`. Empty when the failure is a star overlap.
  IndexSet left;
  IndexSet right;
  int first = -1;
  int second = -1;
  Rational first_value;
  Rational second_value;
  std::string reason;
};

struct FusionOutcome
{
  FusionStatus status = FusionStatus::failed;
  Partition partition;
  std::optional<BasedAlgebra> fused;
  bool seed_preserved = false;
  int rounds = 0;
  std::optional<SeedViolation> violation;
};

using RefineResult = std::variant<Partition, SeedViolation>;

inline Rational fused_coefficient(const BasedAlgebra& a, const IndexSet& left,
                                  const IndexSet& right, int k)
{
  if (left.empty() || right.empty())
    throw std::invalid_argument("fused_coefficient needs nonempty index sets");
  a.check_index(k);
  for (int i : left)
    a.check_index(i);
  for (int j : right)
    a.check_index(j);
  Rational sum(0);
  for (int i : left) {
    for (int j : right) {
      auto terms = a.product(i, j);
      auto it = std::lower_bound(terms.begin(), terms.end(), k,
                                 [](const StructureConstant& t, int key) { return t.k < key; });
      if (it != terms.end() && it->k == k)
        sum += it->value;
    }
  }
  return sum;
}

namespace detail {

template <typename Value>
using SignatureRow = std::vector<std::pair<std::uint64_t, Value>>;

template <typename Value>
bool signature_less(const SignatureRow<Value>& a, const SignatureRow<Value>& b)
{
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t t = 0; t < n; ++t) {
    if (a[t].first != b[t].first)
      return a[t].first < b[t].first;
    if (a[t].second != b[t].second)
      return a[t].second < b[t].second;
  }
  return a.size() < b.size();
}

template <typename Value>
bool signature_equal(const SignatureRow<Value>& a, const SignatureRow<Value>& b)
{
  if (a.size() != b.size())
    return false;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t].first != b[t].first || a[t].second != b[t].second)
      return false;
  return true;
}

inline Rational as_rational(std::int64_t v) { return Rational(static_cast<long>(v)); }
inline const Rational& as_rational(const Rational& v) { return v; }

template <typename Value>
std::vector<SignatureRow<Value>> signatures(const BasedAlgebra& a, const Partition& p)
{
  int r = a.rank();
  auto entries = a.entries();
  auto small = a.small_values();
  std::uint64_t nb = p.size();
  std::vector<SignatureRow<Value>> rows(r);
  SignatureRow<Value> raw;
  for (int k = 0; k < r; ++k) {
    raw.clear();
    for (std::uint32_t idx : a.entries_with_result(k)) {
      const auto& t = entries[idx];
      std::uint64_t key = static_cast<std::uint64_t>(p.block_of(t.i)) * nb +
                          static_cast<std::uint64_t>(p.block_of(t.j));
      if constexpr (std::is_same_v<Value, std::int64_t>)
        raw.emplace_back(key, small[idx]);
      else
        raw.emplace_back(key, t.value);
    }
    std::sort(raw.begin(), raw.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    auto& row = rows[k];
    for (std::size_t t = 0; t < raw.size();) {
      std::size_t u = t;
      Value sum = raw[t].second;
      for (++u; u < raw.size() && raw[u].first == raw[t].first; ++u)
        sum += raw[u].second;
      if (sum != 0)
        row.emplace_back(raw[t].first, std::move(sum));
      t = u;
    }
  }
  return rows;
}

// Splits every block of p by signature; labels are assigned block by block in
// signature order, so the result does not depend on enumeration order.
template <typename Value>
std::vector<int> split_labels(const Partition& p, const std::vector<SignatureRow<Value>>& sig)
{
  std::vector<int> labels(p.rank());
  int next = 0;
  std::vector<int> order;
  for (const auto& block : p.blocks()) {
    order = block;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return signature_less(sig[x], sig[y]);
    });
    for (std::size_t t = 0; t < order.size(); ++t) {
      if (t > 0 && !signature_equal(sig[order[t - 1]], sig[order[t]]))
        ++next;
      labels[order[t]] = next;
    }
    ++next;
  }
  return labels;
}

template <typename Value>
SeedViolation make_violation(const Partition& p, const std::vector<SignatureRow<Value>>& sig,
                             const IndexSet& seed, int first, int second)
{
  SeedViolation v;
  v.seed = seed;
  v.first = first;
  v.second = second;
  std::uint64_t nb = p.size();
  const auto& a = sig[first];
  const auto& b = sig[second];
  std::size_t x = 0, y = 0;
  while (x < a.size() || y < b.size()) {
    std::uint64_t ka = x < a.size() ? a[x].first : UINT64_MAX;
    std::uint64_t kb = y < b.size() ? b[y].first : UINT64_MAX;
    std::uint64_t key = std::min(ka, kb);
    Rational va = (ka == key) ? as_rational(a[x].second) : Rational(0);
    Rational vb = (kb == key) ? as_rational(b[y].second) : Rational(0);
    if (va != vb) {
      v.left = p.block(static_cast<std::size_t>(key / nb));
      v.right = p.block(static_cast<std::size_t>(key % nb));
      v.first_value = va;
      v.second_value = vb;
      break;
    }
    if (ka == key)
      ++x;
    if (kb == key)
      ++y;
  }
  v.reason = "protected set is split by the fused coefficients of a block pair";
  return v;
}

template <typename Value>
RefineResult refine_round(const BasedAlgebra& a, const Partition& p,
                          const std::vector<IndexSet>& protected_sets, bool strict)
{
  auto sig = signatures<Value>(a, p);
  auto labels = split_labels(p, sig);
  if (strict) {
    for (const auto& s : protected_sets) {
      for (int i : s) {
        if (labels[i] != labels[s.front()]) {
          if (p.block_of(i) != p.block_of(s.front())) {
            SeedViolation v;
            v.seed = s;
            v.first = s.front();
            v.second = i;
            v.reason = "protected set is not a union of one block";
            return v;
          }
          return make_violation(p, sig, s, s.front(), i);
        }
      }
    }
  }
  return Partition::from_labels(labels);
}

inline RefineResult refine_once(const BasedAlgebra& a, const Partition& p,
                                const std::vector<IndexSet>& protected_sets, bool strict)
{
  if (p.rank() != a.rank())
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "partition rank does not match algebra rank");
  if (!a.small_values().empty() || a.nonzeros() == 0)
    return refine_round<std::int64_t>(a, p, protected_sets, strict);
  return refine_round<Rational>(a, p, protected_sets, strict);
}

struct FixedPoint
{
  Partition partition;
  int rounds = 0;
  std::optional<SeedViolation> violation;
};

inline FixedPoint refine_to_fixed_point(const BasedAlgebra& a, Partition p,
                                        const std::vector<IndexSet>& protected_sets, bool strict)
{
  FixedPoint out;
  for (;;) {
    auto step = refine_once(a, p, protected_sets, strict);
    ++out.rounds;
    if (auto* v = std::get_if<SeedViolation>(&step)) {
      out.partition = std::move(p);
      out.violation = std::move(*v);
      return out;
    }
    auto& q = std::get<Partition>(step);
    if (q.size() == p.size()) {
      out.partition = std::move(p);
      return out;
    }
    p = std::move(q);
  }
}

inline void check_seeds(const BasedAlgebra& a, const std::vector<IndexSet>& seeds)
{
  std::vector<char> used(a.rank(), 0);
  for (const auto& s : seeds) {
    if (s.empty())
      throw PartitionError(PartitionError::Kind::empty_block, "seed set is empty");
    int in_identity = 0;
    for (int i : s) {
      if (i < 0 || i >= a.rank())
        throw PartitionError(PartitionError::Kind::out_of_range,
                             "seed index " + std::to_string(i) + " outside 0.." +
                               std::to_string(a.rank() - 1));
      if (used[i])
        throw PartitionError(PartitionError::Kind::overlap,
                             "seed index " + std::to_string(i) + " occurs twice");
      used[i] = 1;
      in_identity += a.is_identity(i) ? 1 : 0;
    }
    if (in_identity != 0 && in_identity != static_cast<int>(s.size()))
      throw std::invalid_argument("seed set {" + detail::format_set(s) +
                                  "} mixes identity and non-identity indices");
  }
}

inline bool identity_compatible(const BasedAlgebra& a, const Partition& p)
{
  for (const auto& b : p.blocks()) {
    bool first = a.is_identity(b.front());
    for (int i : b)
      if (a.is_identity(i) != first)
        return false;
  }
  return true;
}

inline IndexSet sorted_image(const IndexSet& s, const Permutation& perm)
{
  IndexSet out;
  out.reserve(s.size());
  for (int i : s)
    out.push_back(perm[i]);
  std::sort(out.begin(), out.end());
  return out;
}

inline bool intersects(const IndexSet& x, const IndexSet& y)
{
  std::size_t a = 0, b = 0;
  while (a < x.size() && b < y.size()) {
    if (x[a] == y[b])
      return true;
    if (x[a] < y[b])
      ++a;
    else
      ++b;
  }
  return false;
}

} // namespace detail

/// Start partition: the seed sets, the identity indices not in any seed, and the
/// remaining indices.
inline Partition initial_partition(const BasedAlgebra& a, const std::vector<IndexSet>& seeds)
{
  detail::check_seeds(a, seeds);
  int q = static_cast<int>(seeds.size());
  std::vector<int> labels(a.rank(), -1);
  for (int s = 0; s < q; ++s)
    for (int i : seeds[s])
      labels[i] = s;
  for (int i = 0; i < a.rank(); ++i)
    if (labels[i] < 0)
      labels[i] = a.is_identity(i) ? q : q + 1;
  return Partition::from_labels(labels);
}

/// One simultaneous splitting round. In strict mode a protected set that would
/// be split yields a SeedViolation instead of a partition.
inline RefineResult refine_step(const BasedAlgebra& a, const Partition& p,
                                const SeedFamily& protected_sets, bool strict)
{
  return detail::refine_once(a, p, protected_sets.sets(), strict);
}

inline bool is_semifusion(const BasedAlgebra& a, const Partition& p)
{
  auto step = detail::refine_once(a, p, {}, false);
  return std::get<Partition>(step).size() == p.size();
}

inline bool is_fusion(const BasedAlgebra& a, const Partition& p)
{
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "is_fusion requires an involution");
  if (p.rank() != a.rank())
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "partition rank does not match algebra rank");
  return detail::identity_compatible(a, p) && star_image(p, *a.star()) == p &&
         is_semifusion(a, p);
}

/// The algebra spanned by the block sums of a semifusion, in the block order of p.
inline BasedAlgebra fused_algebra(const BasedAlgebra& a, const Partition& p)
{
  if (p.rank() != a.rank())
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "partition rank does not match algebra rank");
  if (!is_semifusion(a, p))
    throw std::invalid_argument("partition is not a semifusion");
  if (!detail::identity_compatible(a, p))
    throw std::invalid_argument("identity support is not a union of blocks");

  int s = static_cast<int>(p.size());
  std::vector<StructureConstant> terms;
  for (const auto& t : a.entries()) {
    int bk = p.block_of(t.k);
    if (p.block(bk).front() != t.k)
      continue;
    terms.push_back({p.block_of(t.i), p.block_of(t.j), bk, t.value});
  }
  std::sort(terms.begin(), terms.end(), [](const auto& x, const auto& y) {
    return std::tie(x.i, x.j, x.k) < std::tie(y.i, y.j, y.k);
  });
  std::vector<StructureConstant> merged;
  for (auto& t : terms) {
    if (!merged.empty() && merged.back().i == t.i && merged.back().j == t.j &&
        merged.back().k == t.k)
      merged.back().value += t.value;
    else
      merged.push_back(std::move(t));
  }

  std::vector<int> identity;
  for (int b = 0; b < s; ++b)
    if (a.is_identity(p.block(b).front()))
      identity.push_back(b);

  std::optional<Permutation> star;
  if (a.has_star() && star_image(p, *a.star()) == p) {
    Permutation induced(s);
    for (int b = 0; b < s; ++b)
      induced[b] = p.block_of((*a.star())[p.block(b).front()]);
    star = std::move(induced);
  }
  return build_algebra(std::move(merged), std::move(identity), std::move(star), false, s);
}

namespace detail {

inline FusionOutcome finish(const BasedAlgebra& a, const std::vector<IndexSet>& seeds,
                            FixedPoint fp, bool strict, bool want_fusion)
{
  FusionOutcome out;
  out.rounds = fp.rounds;
  out.partition = std::move(fp.partition);
  if (fp.violation && strict) {
    out.status = FusionStatus::failed;
    out.violation = std::move(fp.violation);
    return out;
  }
  out.seed_preserved = std::all_of(seeds.begin(), seeds.end(),
                                   [&](const IndexSet& s) { return out.partition.has_block(s); });
  if (want_fusion ? !is_fusion(a, out.partition) : !is_semifusion(a, out.partition))
    throw std::logic_error("refinement fixed point failed the semifusion criterion");
  out.fused = fused_algebra(a, out.partition);
  if (!out.seed_preserved)
    out.status = FusionStatus::relaxed;
  else
    out.status = want_fusion ? FusionStatus::fusion : FusionStatus::semifusion;
  return out;
}

} // namespace detail

inline FusionOutcome minimal_isolating_semifusion(const BasedAlgebra& a, const SeedFamily& seeds,
                                                  bool strict)
{
  Partition start = initial_partition(a, seeds.sets());
  auto fp = detail::refine_to_fixed_point(a, std::move(start), seeds.sets(), strict);
  return detail::finish(a, seeds.sets(), std::move(fp), strict, false);
}

inline FusionOutcome minimal_isolating_fusion(const BasedAlgebra& a, const SeedFamily& seeds,
                                              bool strict)
{
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing,
                       "isolating fusions require an involution");
  const auto& star = *a.star();
  const auto& sets = seeds.sets();
  detail::check_seeds(a, sets);

  // Seeds together with their star images must be blocks of one partition.
  std::vector<IndexSet> guarded = sets;
  std::optional<SeedViolation> overlap;
  for (const auto& s : sets) {
    IndexSet img = detail::sorted_image(s, star);
    if (std::find(guarded.begin(), guarded.end(), img) == guarded.end())
      guarded.push_back(std::move(img));
  }
  for (std::size_t x = 0; x < guarded.size() && !overlap; ++x) {
    for (std::size_t y = x + 1; y < guarded.size() && !overlap; ++y) {
      if (detail::intersects(guarded[x], guarded[y])) {
        SeedViolation v;
        v.seed = x < sets.size() ? guarded[x] : guarded[y];
        v.left = guarded[x];
        v.right = guarded[y];
        v.reason = "seed sets and their star images overlap without being equal";
        overlap = std::move(v);
      }
    }
  }

  Partition start;
  if (overlap) {
    if (strict) {
      FusionOutcome out;
      out.status = FusionStatus::failed;
      out.partition = initial_partition(a, sets);
      out.violation = std::move(overlap);
      return out;
    }
    Partition p0 = initial_partition(a, sets);
    start = meet(p0, star_image(p0, star));
    guarded = sets;
  } else {
    start = initial_partition(a, guarded);
  }

  int rounds = 0;
  for (;;) {
    auto fp = detail::refine_to_fixed_point(a, std::move(start), guarded, strict);
    rounds += fp.rounds;
    fp.rounds = rounds;
    if (fp.violation && strict)
      return detail::finish(a, sets, std::move(fp), strict, true);
    Partition mirrored = star_image(fp.partition, star);
    if (mirrored == fp.partition)
      return detail::finish(a, sets, std::move(fp), strict, true);
    start = meet(fp.partition, mirrored);
  }
}

/// Exhaustive reference search: the coarsest identity-compatible partition in
/// which every seed is a block and which passes the semifusion (or fusion)
/// criterion, evaluated directly from a dense copy of the tensor.
inline std::optional<Partition> brute_force_minimal(const BasedAlgebra& a, const SeedFamily& seeds,
                                                    bool want_fusion, int rank_cap = 12);

namespace detail {

template <typename Value>
class DenseCriterion
{
public:
  explicit DenseCriterion(const BasedAlgebra& a)
  : r_(a.rank()), lambda_(static_cast<std::size_t>(r_) * r_ * r_, Value(0)), coeff_(r_)
  {
    auto small = a.small_values();
    auto entries = a.entries();
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const auto& e = entries[t];
      if constexpr (std::is_same_v<Value, std::int64_t>)
        lambda_[index(e.i, e.j, e.k)] = small[t];
      else
        lambda_[index(e.i, e.j, e.k)] = e.value;
    }
  }

  bool holds(const std::vector<IndexSet>& blocks) const
  {
    for (const auto& left : blocks) {
      for (const auto& right : blocks) {
        for (int k = 0; k < r_; ++k) {
          Value sum(0);
          for (int i : left)
            for (int j : right)
              sum += lambda_[index(i, j, k)];
          coeff_[k] = sum;
        }
        for (const auto& block : blocks)
          for (int k : block)
            if (coeff_[k] != coeff_[block.front()])
              return false;
      }
    }
    return true;
  }

private:
  std::size_t index(int i, int j, int k) const
  {
    return (static_cast<std::size_t>(i) * r_ + j) * r_ + k;
  }

  int r_;
  std::vector<Value> lambda_;
  mutable std::vector<Value> coeff_;
};

// Calls visit(labels) for every set partition of `items` (restricted growth strings).
inline void for_each_set_partition(const std::vector<int>& items,
                                   const std::function<void(const std::vector<int>&)>& visit)
{
  std::vector<int> rgs(items.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int used) {
    if (pos == items.size()) {
      visit(rgs);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      rgs[pos] = b;
      rec(pos + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

template <typename Value>
std::optional<Partition> brute_force_impl(const BasedAlgebra& a, const SeedFamily& seeds,
                                          bool want_fusion)
{
  const auto& sets = seeds.sets();
  int r = a.rank();
  std::vector<int> fixed(r, -1);
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (int i : sets[s])
      fixed[i] = static_cast<int>(s);
  std::vector<int> free_identity, free_other;
  for (int i = 0; i < r; ++i) {
    if (fixed[i] >= 0)
      continue;
    (a.is_identity(i) ? free_identity : free_other).push_back(i);
  }

  DenseCriterion<Value> criterion(a);
  std::vector<Partition> maximal;
  int base = static_cast<int>(sets.size());
  int offset = base + static_cast<int>(free_identity.size());
  std::vector<int> labels = fixed;

  for_each_set_partition(free_identity, [&](const std::vector<int>& lhs) {
    for (std::size_t t = 0; t < free_identity.size(); ++t)
      labels[free_identity[t]] = base + lhs[t];
    for_each_set_partition(free_other, [&](const std::vector<int>& rhs) {
      for (std::size_t t = 0; t < free_other.size(); ++t)
        labels[free_other[t]] = offset + rhs[t];
      Partition candidate = Partition::from_labels(labels);
      if (want_fusion && star_image(candidate, *a.star()) != candidate)
        return;
      for (const auto& m : maximal)
        if (is_refinement(candidate, m))
          return;
      if (!criterion.holds(candidate.blocks()))
        return;
      std::erase_if(maximal, [&](const Partition& m) { return is_refinement(m, candidate); });
      maximal.push_back(std::move(candidate));
    });
  });

  if (maximal.empty())
    return std::nullopt;
  if (maximal.size() > 1) {
    std::string msg = "exhaustive search found " + std::to_string(maximal.size()) +
                      " incomparable coarsest isolating partitions:";
    for (const auto& m : maximal)
      msg += " [" + to_string(m) + "]";
    throw std::logic_error(msg);
  }
  return maximal.front();
}

} // namespace detail

inline std::optional<Partition> brute_force_minimal(const BasedAlgebra& a, const SeedFamily& seeds,
                                                    bool want_fusion, int rank_cap)
{
  if (a.rank() > rank_cap)
    throw std::invalid_argument("exhaustive search limited to rank " + std::to_string(rank_cap) +
                                ", algebra has rank " + std::to_string(a.rank()));
  if (want_fusion && !a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "fusion search requires an involution");
  detail::check_seeds(a, seeds.sets());
  if (!a.small_values().empty() || a.nonzeros() == 0)
    return detail::brute_force_impl<std::int64_t>(a, seeds, want_fusion);
  return detail::brute_force_impl<Rational>(a, seeds, want_fusion);
}

} // namespace isofuse

#endif // ISOFUSE_FUSION_HPP
