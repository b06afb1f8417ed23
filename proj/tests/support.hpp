#ifndef ISOFUSE_TESTS_SUPPORT_HPP
#define ISOFUSE_TESTS_SUPPORT_HPP

// Fixtures and reference constructions shared by the test binaries. Everything
// here is built from first principles (group tables, matrix units, direct path
// counting) rather than through the library code paths under test.

#include "isofuse/isofuse.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace fixtures {

using namespace isofuse;

inline BasedAlgebra c2()
{
  return build_algebra({{0, 0, 0, 1}, {0, 1, 1, 1}, {1, 0, 1, 1}, {1, 1, 0, 1}}, {0}, Permutation{0, 1},
                       true);
}

/// Group algebra of Z_n with b_i b_j = b_{i+j}.
inline BasedAlgebra cyclic(int n)
{
  std::vector<StructureConstant> t;
  Permutation star(n);
  for (int i = 0; i < n; ++i) {
    star[i] = (n - i) % n;
    for (int j = 0; j < n; ++j)
      t.push_back({i, j, (i + j) % n, Rational(1)});
  }
  return build_algebra(std::move(t), {0}, star, true);
}

inline RelationMatrix cyclic_relations(int n)
{
  std::vector<int> c(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      c[static_cast<std::size_t>(x) * n + y] = ((y - x) % n + n) % n;
  return RelationMatrix(n, c);
}

/// Index of the matrix unit E_{uv} (0-based points) in the matrix-unit fixture.
inline int unit(int n, int u, int v) { return u * n + v; }

/// Full matrix algebra in the basis of matrix units: E_uv E_vw = E_uw.
inline BasedAlgebra full_matrix(int n)
{
  std::vector<StructureConstant> t;
  std::vector<int> identity;
  Permutation star(n * n);
  for (int u = 0; u < n; ++u) {
    identity.push_back(unit(n, u, u));
    for (int v = 0; v < n; ++v) {
      star[unit(n, u, v)] = unit(n, v, u);
      for (int w = 0; w < n; ++w)
        t.push_back({unit(n, u, v), unit(n, v, w), unit(n, u, w), Rational(1)});
    }
  }
  return build_algebra(std::move(t), identity, star, true);
}

/// Direct count of lambda_ijk over all pairs; nullopt when two pairs of a colour disagree.
inline std::optional<std::map<std::tuple<int, int, int>, long>> recount(const RelationMatrix& m)
{
  int n = m.order();
  std::map<std::tuple<int, int, int>, long> lambda;
  std::map<int, std::map<std::pair<int, int>, long>> seen;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::map<std::pair<int, int>, long> counts;
      for (int z = 0; z < n; ++z)
        ++counts[{m(x, z), m(z, y)}];
      int k = m(x, y);
      auto it = seen.find(k);
      if (it == seen.end())
        seen[k] = counts;
      else if (it->second != counts)
        return std::nullopt;
    }
  for (const auto& [k, counts] : seen)
    for (const auto& [ij, c] : counts)
      lambda[{ij.first, ij.second, k}] = c;
  return lambda;
}

/// Deterministic uniform draw in [0, bound).
inline int draw(std::mt19937_64& rng, int bound)
{
  std::uint64_t b = static_cast<std::uint64_t>(bound);
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % b;
  for (;;) {
    std::uint64_t v = rng();
    if (v < limit)
      return static_cast<int>(v % b);
  }
}

inline Permutation random_permutation(std::mt19937_64& rng, int n)
{
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(p[i], p[draw(rng, i + 1)]);
  return p;
}

/// Orbits of <gens> on pairs, computed by plain repeated sweeps (no queue), numbered
/// in order of least pair with diagonal pairs first.
inline RelationMatrix naive_orbitals(int n, const std::vector<Permutation>& gens)
{
  std::vector<int> label(n * n);
  std::iota(label.begin(), label.end(), 0);
  auto find = [&](int a) {
    while (label[a] != a)
      a = label[a] = label[label[a]];
    return a;
  };
  for (const auto& g : gens)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int a = find(x * n + y), b = find(g[x] * n + g[y]);
        if (a != b)
          label[std::max(a, b)] = std::min(a, b);
      }
  std::vector<int> order;
  for (int x = 0; x < n; ++x)
    order.push_back(x * n + x);
  for (int p = 0; p < n * n; ++p)
    if (p / n != p % n)
      order.push_back(p);
  std::map<int, int> color;
  std::vector<int> out(n * n);
  for (int p : order) {
    int root = find(p);
    auto it = color.emplace(root, static_cast<int>(color.size())).first;
    out[p] = it->second;
  }
  return RelationMatrix(n, out);
}

/// Merges colour classes of m by a map old->new; returns nullopt if the result is not coherent
/// or violates the fibre/transpose conditions.
inline std::optional<RelationMatrix> recolor(const RelationMatrix& m, const std::vector<int>& map)
{
  std::vector<int> c(m.colors().size());
  for (std::size_t t = 0; t < c.size(); ++t)
    c[t] = map[m.colors()[t]];
  // Renumber the surviving colours densely.
  std::map<int, int> dense;
  for (int& v : c)
    v = dense.emplace(v, static_cast<int>(dense.size())).first->second;
  try {
    RelationMatrix out(m.order(), c);
    (void)algebra_from_relations(out);
    return out;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Merges colours a and b, and with them their transposes, if the result stays coherent.
inline std::optional<RelationMatrix> merge_colors(const RelationMatrix& m, int a, int b)
{
  std::vector<int> t(m.rank(), -1);
  for (int x = 0; x < m.order(); ++x)
    for (int y = 0; y < m.order(); ++y)
      t[m(x, y)] = m(y, x);
  std::vector<int> parent(m.rank());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v)
      v = parent[v];
    return v;
  };
  auto unite = [&](int u, int v) {
    u = find(u);
    v = find(v);
    if (u != v)
      parent[std::max(u, v)] = std::min(u, v);
  };
  unite(a, b);
  unite(t[a], t[b]);
  std::vector<int> map(m.rank());
  for (int v = 0; v < m.rank(); ++v)
    map[v] = find(v);
  return recolor(m, map);
}

/// Random coherent configurations of order <= max_order and rank <= max_rank: orbital
/// configurations of random permutation groups, coarsened by random colour merges
/// that are kept only when the merged colouring is still coherent.
inline std::vector<RelationMatrix> random_configurations(std::uint64_t seed, int count,
                                                         int max_order = 10, int max_rank = 10)
{
  std::mt19937_64 rng(seed);
  std::vector<RelationMatrix> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts < 200 * count) {
    ++attempts;
    int n = 3 + draw(rng, max_order - 2);
    std::vector<Permutation> gens;
    int ngens = 1 + draw(rng, 2);
    for (int g = 0; g < ngens; ++g) {
      Permutation p = random_permutation(rng, n);
      // Sparser generators give richer orbital structure.
      if (draw(rng, 2) == 0) {
        Permutation q(n);
        std::iota(q.begin(), q.end(), 0);
        int a = draw(rng, n), b = draw(rng, n), c = draw(rng, n);
        if (a != b && b != c && a != c) {
          q[a] = b;
          q[b] = c;
          q[c] = a;
        }
        p = q;
      }
      gens.push_back(p);
    }
    RelationMatrix m = naive_orbitals(n, gens);
    int guard = 0;
    while (m.rank() > max_rank && guard++ < 200) {
      int a = draw(rng, m.rank()), b = draw(rng, m.rank());
      if (a == b)
        continue;
      if (auto next = merge_colors(m, a, b))
        m = *next;
    }
    if (m.rank() > max_rank || m.rank() < 2)
      continue;
    // One extra random merge attempt gives non-Schurian-looking fusions some of the time.
    if (draw(rng, 2) == 0 && m.rank() > 3) {
      int a = draw(rng, m.rank()), b = draw(rng, m.rank());
      if (a != b)
        if (auto next = merge_colors(m, a, b))
          m = *next;
    }
    out.push_back(m);
  }
  return out;
}

/// Seed families with at most two disjoint non-identity sets of size at most three.
inline std::vector<SeedFamily> small_seed_families(const BasedAlgebra& a, int max_size = 3,
                                                   int max_sets = 2)
{
  std::vector<int> items;
  for (int i = 0; i < a.rank(); ++i)
    if (!a.is_identity(i))
      items.push_back(i);
  std::vector<IndexSet> sets;
  int n = static_cast<int>(items.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    if (__builtin_popcount(static_cast<unsigned>(mask)) > max_size)
      continue;
    IndexSet s;
    for (int b = 0; b < n; ++b)
      if (mask & (1 << b))
        s.push_back(items[b]);
    sets.push_back(s);
  }
  std::vector<SeedFamily> out;
  for (const auto& s : sets)
    out.emplace_back(std::vector<IndexSet>{s}, a.rank());
  if (max_sets >= 2)
    for (std::size_t x = 0; x < sets.size(); ++x)
      for (std::size_t y = x + 1; y < sets.size(); ++y) {
        std::vector<int> both;
        std::set_intersection(sets[x].begin(), sets[x].end(), sets[y].begin(), sets[y].end(),
                              std::back_inserter(both));
        if (both.empty())
          out.emplace_back(std::vector<IndexSet>{sets[x], sets[y]}, a.rank());
      }
  return out;
}

/// Every partition of {0..r-1}, restricted-growth order.
inline std::vector<Partition> all_partitions(int r)
{
  std::vector<Partition> out;
  std::vector<int> labels(r, 0), maxes(r, 0);
  for (;;) {
    out.push_back(Partition::from_labels(labels));
    int i = r - 1;
    while (i > 0 && labels[i] == maxes[i - 1] + 1)
      --i;
    if (i == 0)
      break;
    ++labels[i];
    for (int j = i; j < r; ++j) {
      if (j > i)
        labels[j] = 0;
      maxes[j] = std::max(maxes[j - 1], labels[j]);
    }
  }
  return out;
}

/// Semifusion criterion checked directly on a dense tensor with rationals.
inline bool naive_semifusion(const BasedAlgebra& a, const Partition& p)
{
  int r = a.rank();
  std::vector<Rational> dense(static_cast<std::size_t>(r) * r * r, Rational(0));
  for (const auto& t : a.entries())
    dense[(static_cast<std::size_t>(t.i) * r + t.j) * r + t.k] = t.value;
  for (const auto& bi : p.blocks())
    for (const auto& bj : p.blocks())
      for (const auto& bk : p.blocks()) {
        std::optional<Rational> first;
        for (int k : bk) {
          Rational s = 0;
          for (int i : bi)
            for (int j : bj)
              s += dense[(static_cast<std::size_t>(i) * r + j) * r + k];
          if (!first)
            first = s;
          else if (*first != s)
            return false;
        }
      }
  return true;
}

inline bool naive_fusion(const BasedAlgebra& a, const Partition& p)
{
  for (const auto& b : p.blocks()) {
    bool any = false, all = true;
    for (int i : b) {
      any = any || a.is_identity(i);
      all = all && a.is_identity(i);
    }
    if (any && !all)
      return false;
    std::vector<int> img;
    for (int i : b)
      img.push_back((*a.star())[i]);
    std::sort(img.begin(), img.end());
    if (!p.has_block(img))
      return false;
  }
  return naive_semifusion(a, p);
}

/// Compares the strict isolating algorithm with the exhaustive oracle on one seed family;
/// returns an empty string on agreement, otherwise a description of the mismatch.
inline std::string oracle_mismatch(const BasedAlgebra& a, const SeedFamily& seeds, bool want_fusion)
{
  FusionOutcome out = want_fusion ? minimal_isolating_fusion(a, seeds, true)
                                  : minimal_isolating_semifusion(a, seeds, true);
  auto oracle = brute_force_minimal(a, seeds, want_fusion);
  std::string where = " (seeds";
  for (const auto& s : seeds.sets())
    where += " {" + detail::format_set(s) + "}";
  where += want_fusion ? ", fusion)" : ", semifusion)";
  bool failed = out.status == FusionStatus::failed;
  if (failed && oracle)
    return "algorithm failed, oracle found " + to_string(*oracle) + where;
  if (!failed && !oracle)
    return "algorithm returned " + to_string(out.partition) + ", oracle found none" + where;
  if (oracle && out.partition != *oracle)
    return "algorithm " + to_string(out.partition) + " vs oracle " + to_string(*oracle) + where;
  if (!failed && !(want_fusion ? naive_fusion(a, out.partition) : naive_semifusion(a, out.partition)))
    return "algorithm output fails the direct criterion" + where;
  return {};
}

/// Relabels the basis: new index of i is perm[i].
inline BasedAlgebra relabel(const BasedAlgebra& a, const Permutation& perm)
{
  std::vector<StructureConstant> t;
  for (const auto& e : a.entries())
    t.push_back({perm[e.i], perm[e.j], perm[e.k], e.value});
  std::vector<int> identity;
  for (int e : a.identity_support())
    identity.push_back(perm[e]);
  std::optional<Permutation> star;
  if (a.has_star()) {
    Permutation s(a.rank());
    for (int i = 0; i < a.rank(); ++i)
      s[perm[i]] = perm[(*a.star())[i]];
    star = s;
  }
  return build_algebra(std::move(t), identity, star, false, a.rank());
}

/// Dense r x r product with rationals.
inline RationalMatrix matmul(const RationalMatrix& x, const RationalMatrix& y)
{
  std::size_t n = x.size();
  RationalMatrix z(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (x[i][k] == 0)
        continue;
      for (std::size_t j = 0; j < n; ++j)
        z[i][j] += x[i][k] * y[k][j];
    }
  return z;
}

/// Characteristic polynomial det(xI - M) by the Faddeev-LeVerrier recurrence,
/// returned as rational coefficients in ascending order.
inline std::vector<Rational> characteristic_polynomial(const RationalMatrix& m)
{
  std::size_t n = m.size();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RationalMatrix mk(n, std::vector<Rational>(n, Rational(0)));
  RationalMatrix ident = mk;
  for (std::size_t i = 0; i < n; ++i)
    ident[i][i] = 1;
  // M_0 = 0, c_n = 1; M_k = A M_{k-1} + c_{n-k+1} I; c_{n-k} = -tr(A M_k)/k.
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = matmul(m, mk);
    for (std::size_t i = 0; i < n; ++i)
      next[i][i] += c[n - k + 1];
    mk = next;
    RationalMatrix am = matmul(m, mk);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      tr += am[i][i];
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return c;
}

/// Evaluates a polynomial at a square matrix by Horner's rule.
inline RationalMatrix evaluate_at(const Polynomial& p, const RationalMatrix& m)
{
  std::size_t n = m.size();
  RationalMatrix acc(n, std::vector<Rational>(n, Rational(0)));
  for (int d = p.degree(); d >= 0; --d) {
    acc = matmul(acc, m);
    for (std::size_t i = 0; i < n; ++i)
      acc[i][i] += Rational(p.coefficient(d));
  }
  return acc;
}

inline bool is_zero_matrix(const RationalMatrix& m)
{
  for (const auto& row : m)
    for (const auto& v : row)
      if (v != 0)
        return false;
  return true;
}

/// The group of order 96 from semidirect data m=4, k=6, M=[[2,1],[1,1]].
inline FiniteGroup g96() { return semidirect_group(4, 6, Matrix2{{{2, 1}, {1, 1}}}); }

} // namespace fixtures

#endif // ISOFUSE_TESTS_SUPPORT_HPP
