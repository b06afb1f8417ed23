#ifndef ISOFUSE_LATTICE_HPP
#define ISOFUSE_LATTICE_HPP

#include "isofuse/based_algebra.hpp"
#include "isofuse/eigen.hpp"
#include "isofuse/fusion.hpp"
#include "isofuse/parallel.hpp"
#include "isofuse/partition.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isofuse {

/// Relabelling-invariant summary of a fused algebra.
struct Fingerprint
{
  int rank = 0;
  /// (valency, minimal polynomial) per basis element, sorted.
  std::vector<std::pair<std::string, std::string>> classes;
  std::vector<Rational> constants;

  std::string canonical_text() const
  {
    std::ostringstream out;
    out << "rank " << rank << '\n';
    for (const auto& [val, poly] : classes)
      out << "class " << val << " | " << poly << '\n';
    out << "constants";
    for (const auto& c : constants)
      out << ' ' << c.get_str();
    out << '\n';
    return out.str();
  }

  std::uint64_t hash() const
  {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  std::string hex() const
  {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
  }

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint algebra_fingerprint(const BasedAlgebra& a)
{
  Fingerprint fp;
  fp.rank = a.rank();
  for (int i = 0; i < a.rank(); ++i) {
    std::string val = a.has_star() ? valency(a, i).get_str() : "-";
    fp.classes.emplace_back(val, to_string(minimal_polynomial(a, a.basis_vector(i))));
  }
  std::sort(fp.classes.begin(), fp.classes.end());
  for (const auto& t : a.entries())
    fp.constants.push_back(t.value);
  std::sort(fp.constants.begin(), fp.constants.end());
  return fp;
}

inline Fingerprint fingerprint(const BasedAlgebra& a, const Partition& p)
{
  return algebra_fingerprint(fused_algebra(a, p));
}

/// A fusion partition together with every seed family that produced it.
struct FoundFusion
{
  Partition partition;
  FusionOutcome outcome;
  std::vector<SeedFamily> seeds;
};

namespace detail {

inline std::vector<int> non_identity_indices(const BasedAlgebra& a)
{
  std::vector<int> out;
  for (int i = 0; i < a.rank(); ++i)
    if (!a.is_identity(i))
      out.push_back(i);
  return out;
}

// Subsets of `items` with 1..max_size elements: by size, colexicographic within a size.
inline std::vector<IndexSet> colex_subsets(const std::vector<int>& items, int max_size)
{
  std::vector<IndexSet> out;
  int n = static_cast<int>(items.size());
  for (int k = 1; k <= std::min(max_size, n); ++k) {
    std::vector<std::vector<int>> level;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
      idx[i] = i;
    for (;;) {
      level.push_back(idx);
      if (!next_combination(idx, n))
        break;
    }
    std::sort(level.begin(), level.end(), [](const auto& x, const auto& y) {
      return std::lexicographical_compare(x.rbegin(), x.rend(), y.rbegin(), y.rend());
    });
    for (const auto& c : level) {
      IndexSet s;
      for (int i : c)
        s.push_back(items[i]);
      out.push_back(std::move(s));
    }
  }
  return out;
}

inline bool disjoint_sorted(const IndexSet& x, const IndexSet& y)
{
  return !intersects(x, y);
}

inline std::vector<FoundFusion> evaluate_families(const BasedAlgebra& a,
                                                  const std::vector<SeedFamily>& families, int jobs)
{
  std::vector<std::optional<FusionOutcome>> results(families.size());
  parallel_for(families.size(), jobs, [&](std::size_t t) {
    auto out = minimal_isolating_fusion(a, families[t], true);
    if (out.status != FusionStatus::failed)
      results[t] = std::move(out);
  });
  std::map<std::vector<int>, std::size_t> index;
  std::vector<FoundFusion> found;
  for (std::size_t t = 0; t < families.size(); ++t) {
    if (!results[t])
      continue;
    const Partition& p = results[t]->partition;
    auto [it, inserted] = index.emplace(p.labels(), found.size());
    if (inserted)
      found.push_back({p, *results[t], {}});
    found[it->second].seeds.push_back(families[t]);
  }
  std::sort(found.begin(), found.end(),
            [](const FoundFusion& x, const FoundFusion& y) { return x.partition < y.partition; });
  return found;
}

inline void merge_found(std::vector<FoundFusion>& into, std::vector<FoundFusion> more)
{
  for (auto& f : more) {
    auto it = std::find_if(into.begin(), into.end(),
                           [&](const FoundFusion& g) { return g.partition == f.partition; });
    if (it == into.end())
      into.push_back(std::move(f));
    else
      it->seeds.insert(it->seeds.end(), f.seeds.begin(), f.seeds.end());
  }
  std::sort(into.begin(), into.end(),
            [](const FoundFusion& x, const FoundFusion& y) { return x.partition < y.partition; });
}

} // namespace detail

struct EnumerationOptions
{
  int max_seed_size = 1;
  /// Largest number of seed sets combined in the multi-set stage; 0 or 1 disables it.
  int multi = 0;
  /// Combine arbitrary subsets in the multi-set stage instead of only successful seeds.
  bool combine_any = false;
  int jobs = 1;
};

/// Strict isolating fusions of every seed set up to the size limit, then (optionally)
/// of families of disjoint seed sets. Identical partitions are merged and keep the
/// list of all seed families producing them.
inline std::vector<FoundFusion> enumerate_seed_fusions(const BasedAlgebra& a,
                                                       const EnumerationOptions& opt)
{
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "fusion enumeration needs an involution");
  if (opt.max_seed_size < 1)
    throw std::invalid_argument("max seed size must be at least 1");
  auto subsets = detail::colex_subsets(detail::non_identity_indices(a), opt.max_seed_size);
  std::vector<SeedFamily> singles;
  for (const auto& s : subsets)
    singles.emplace_back(std::vector<IndexSet>{s}, a.rank());
  auto found = detail::evaluate_families(a, singles, opt.jobs);
  if (opt.multi < 2)
    return found;

  std::vector<IndexSet> pool;
  if (opt.combine_any) {
    pool = subsets;
  } else {
    std::set<IndexSet> successful;
    for (const auto& f : found)
      for (const auto& sf : f.seeds)
        successful.insert(sf.sets().front());
    for (const auto& s : subsets)
      if (successful.count(s))
        pool.push_back(s);
  }

  std::vector<SeedFamily> families;
  std::vector<int> chosen;
  auto extend = [&](auto&& self, std::size_t from) -> void {
    if (chosen.size() >= 2) {
      std::vector<IndexSet> sets;
      for (int c : chosen)
        sets.push_back(pool[c]);
      families.emplace_back(std::move(sets), a.rank());
    }
    if (static_cast<int>(chosen.size()) == opt.multi)
      return;
    for (std::size_t c = from; c < pool.size(); ++c) {
      bool ok = std::all_of(chosen.begin(), chosen.end(),
                            [&](int d) { return detail::disjoint_sorted(pool[d], pool[c]); });
      if (!ok)
        continue;
      chosen.push_back(static_cast<int>(c));
      self(self, c + 1);
      chosen.pop_back();
    }
  };
  extend(extend, 0);
  detail::merge_found(found, detail::evaluate_families(a, families, opt.jobs));
  return found;
}

namespace detail {

// Uniform draw from [0, bound) by rejection, identical on every platform.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t bound)
{
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit)
      return v % bound;
  }
}

} // namespace detail

struct SearchOptions
{
  int samples = 0;
  int min_size = 1;
  int max_size = 1;
  int family_size = 1;
  std::uint64_t rng_seed = 0;
  int jobs = 1;
  /// Families evaluated before the random ones.
  std::vector<SeedFamily> planted;
};

/// Draws seed families of disjoint random subsets with sizes in [min_size, max_size]
/// from a seeded mt19937_64 and returns the distinct strict fusions they produce.
inline std::vector<FoundFusion> random_seed_search(const BasedAlgebra& a, const SearchOptions& opt)
{
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "random seed search needs an involution");
  auto pool = detail::non_identity_indices(a);
  if (opt.samples < 0 || opt.min_size < 1 || opt.max_size < opt.min_size || opt.family_size < 1 ||
      static_cast<long>(opt.family_size) * opt.min_size > static_cast<long>(pool.size()))
    throw std::invalid_argument("invalid sample count, size range or family size");
  std::mt19937_64 rng(opt.rng_seed);
  std::vector<SeedFamily> families = opt.planted;
  for (int s = 0; s < opt.samples; ++s) {
    std::vector<int> avail = pool;
    std::vector<IndexSet> sets;
    for (int f = 0; f < opt.family_size; ++f) {
      int remaining_sets = opt.family_size - f - 1;
      int cap = std::min<int>(opt.max_size,
                              static_cast<int>(avail.size()) - remaining_sets * opt.min_size);
      int size = opt.min_size +
                 static_cast<int>(detail::bounded_draw(rng, static_cast<std::uint64_t>(cap - opt.min_size + 1)));
      IndexSet set;
      for (int t = 0; t < size; ++t) {
        auto pick = static_cast<std::size_t>(
          detail::bounded_draw(rng, static_cast<std::uint64_t>(avail.size())));
        set.push_back(avail[pick]);
        avail[pick] = avail.back();
        avail.pop_back();
      }
      sets.push_back(std::move(set));
    }
    families.emplace_back(std::move(sets), a.rank());
  }
  return detail::evaluate_families(a, families, opt.jobs);
}

struct FingerprintClass
{
  Fingerprint fingerprint;
  std::vector<std::size_t> members;
};

/// Groups found fusions whose fused algebras share a fingerprint; the class size is the
/// number of distinct partitions giving the same algebra.
inline std::vector<FingerprintClass> group_by_fingerprint(const BasedAlgebra& a,
                                                          const std::vector<FoundFusion>& found,
                                                          int jobs = 1)
{
  std::vector<Fingerprint> fps(found.size());
  parallel_for(found.size(), jobs, [&](std::size_t t) { fps[t] = fingerprint(a, found[t].partition); });
  std::vector<FingerprintClass> classes;
  for (std::size_t t = 0; t < found.size(); ++t) {
    auto it = std::find_if(classes.begin(), classes.end(),
                           [&](const FingerprintClass& c) { return c.fingerprint == fps[t]; });
    if (it == classes.end())
      classes.push_back({fps[t], {t}});
    else
      it->members.push_back(t);
  }
  return classes;
}

struct LatticeNode
{
  Partition partition;
  Fingerprint fingerprint;
};

struct LatticeGraph
{
  std::vector<LatticeNode> nodes;
  /// Covering pairs (finer, coarser) as node indices.
  std::vector<std::pair<int, int>> edges;
};

/// Trivial fusion: the identity support as its own blocks, everything else as one block.
inline std::optional<Partition> trivial_fusion(const BasedAlgebra& a)
{
  std::vector<int> labels(a.rank());
  bool rest = false;
  for (int i = 0; i < a.rank(); ++i) {
    labels[i] = a.is_identity(i) ? i : a.rank();
    rest = rest || !a.is_identity(i);
  }
  if (!rest)
    return std::nullopt;
  Partition p = Partition::from_labels(labels);
  if (a.has_star() && is_fusion(a, p))
    return p;
  return std::nullopt;
}

inline LatticeGraph build_fusion_lattice(const BasedAlgebra& a, const std::vector<Partition>& parts,
                                         int jobs = 1)
{
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "fusion lattices need an involution");
  std::vector<Partition> all;
  for (const auto& p : parts) {
    if (!is_fusion(a, p))
      throw std::invalid_argument("partition " + to_string(p) + " is not a fusion");
    all.push_back(p);
  }
  all.push_back(Partition::discrete(a.rank()));
  if (auto t = trivial_fusion(a))
    all.push_back(*t);
  std::sort(all.begin(), all.end(), [](const Partition& x, const Partition& y) {
    if (x.size() != y.size())
      return x.size() > y.size();
    return x.labels() < y.labels();
  });
  all.erase(std::unique(all.begin(), all.end()), all.end());

  LatticeGraph g;
  g.nodes.resize(all.size());
  parallel_for(all.size(), jobs, [&](std::size_t t) {
    g.nodes[t] = {all[t], fingerprint(a, all[t])};
  });
  int n = static_cast<int>(all.size());
  std::vector<std::vector<char>> below(n, std::vector<char>(n, 0));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      below[x][y] = x != y && is_refinement(all[x], all[y]);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (!below[x][y])
        continue;
      bool covers = true;
      for (int z = 0; z < n && covers; ++z)
        covers = !(below[x][z] && below[z][y]);
      if (covers)
        g.edges.emplace_back(x, y);
    }
  return g;
}

inline std::string emit_lattice_dot(const LatticeGraph& g)
{
  std::ostringstream out;
  out << "digraph fusion_lattice {\n";
  out << "  node [shape=box];\n";
  for (std::size_t t = 0; t < g.nodes.size(); ++t)
    out << "  n" << t << " [label=\"rank=" << g.nodes[t].partition.size()
        << " fp=" << g.nodes[t].fingerprint.hex() << "\", tooltip=\""
        << to_string(g.nodes[t].partition) << "\"];\n";
  for (const auto& [x, y] : g.edges)
    out << "  n" << x << " -> n" << y << ";\n";
  out << "}\n";
  return out.str();
}

class AutomorphismCapError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// All permutations of the basis preserving every structure constant, the identity
/// support and the involution, sorted lexicographically.
inline std::vector<Permutation> algebraic_automorphism_group(const BasedAlgebra& a, int rank_cap = 40)
{
  int r = a.rank();
  if (r > rank_cap)
    throw AutomorphismCapError("rank " + std::to_string(r) + " exceeds the automorphism cap " +
                               std::to_string(rank_cap));
  // Candidates are pruned by a per-element invariant.
  std::vector<std::string> invariant(r);
  for (int i = 0; i < r; ++i) {
    std::ostringstream key;
    key << a.is_identity(i) << '|' << to_string(minimal_polynomial(a, a.basis_vector(i)));
    if (a.has_star())
      key << '|' << valency(a, i).get_str() << '|' << ((*a.star())[i] == i);
    std::vector<Rational> row;
    for (int j = 0; j < r; ++j)
      for (const auto& t : a.product(i, j))
        row.push_back(t.value);
    std::sort(row.begin(), row.end());
    for (const auto& v : row)
      key << ' ' << v.get_str();
    invariant[i] = key.str();
  }

  std::vector<Rational> dense(static_cast<std::size_t>(r) * r * r, Rational(0));
  auto at = [&](int i, int j, int k) -> const Rational& {
    return dense[(static_cast<std::size_t>(i) * r + j) * r + k];
  };
  for (const auto& t : a.entries())
    dense[(static_cast<std::size_t>(t.i) * r + t.j) * r + t.k] = t.value;

  std::vector<Permutation> out;
  Permutation sigma(r, -1);
  std::vector<char> used(r, 0);
  const std::optional<Permutation>& star = a.star();

  // Checks every constant whose indices are all assigned and include i.
  auto consistent = [&](int i) {
    if (star) {
      int si = (*star)[i];
      if (si <= i && sigma[si] != (*star)[sigma[i]])
        return false;
    }
    for (int u = 0; u <= i; ++u)
      for (int v = 0; v <= i; ++v)
        if (at(i, u, v) != at(sigma[i], sigma[u], sigma[v]) ||
            at(u, i, v) != at(sigma[u], sigma[i], sigma[v]) ||
            at(u, v, i) != at(sigma[u], sigma[v], sigma[i]))
          return false;
    return true;
  };

  auto search = [&](auto&& self, int i) -> void {
    if (i == r) {
      out.push_back(sigma);
      return;
    }
    for (int c = 0; c < r; ++c) {
      if (used[c] || invariant[c] != invariant[i])
        continue;
      sigma[i] = c;
      used[c] = 1;
      if (consistent(i))
        self(self, i + 1);
      used[c] = 0;
      sigma[i] = -1;
    }
  };
  search(search, 0);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace isofuse

#endif // ISOFUSE_LATTICE_HPP
