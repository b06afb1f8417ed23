#ifndef ISOFUSE_ORBITALS_HPP
#define ISOFUSE_ORBITALS_HPP

#include "isofuse/based_algebra.hpp"
#include "isofuse/partition.hpp"
#include "isofuse/scheme_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <istream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isofuse {

class GroupError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

struct PermGroup
{
  int degree = 0;
  std::vector<Permutation> generators;

  PermGroup() = default;
  PermGroup(int n, std::vector<Permutation> gens)
  : degree(n), generators(std::move(gens))
  {
    if (degree < 1)
      throw GroupError("permutation group degree must be positive");
    for (std::size_t g = 0; g < generators.size(); ++g)
      if (static_cast<int>(generators[g].size()) != degree || !is_permutation(generators[g]))
        throw GroupError("generator " + std::to_string(g) + " is not a permutation of 0.." +
                         std::to_string(degree - 1));
  }
};

using Matrix2 = std::array<std::array<int, 2>, 2>;

/// Finite group held as a Cayley table; semidirect groups also keep their
/// ((a,b),c) coordinates and the named generators x, y, z.
class FiniteGroup
{
public:
  /// Validates closure, associativity, identity and inverses of an explicit table.
  static FiniteGroup from_table(std::vector<std::vector<int>> table)
  {
    FiniteGroup g;
    int n = static_cast<int>(table.size());
    if (n == 0)
      throw GroupError("multiplication table is empty");
    g.order_ = n;
    g.table_.resize(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a) {
      if (static_cast<int>(table[a].size()) != n)
        throw GroupError("multiplication table is not square");
      for (int b = 0; b < n; ++b) {
        int c = table[a][b];
        if (c < 0 || c >= n)
          throw GroupError("multiplication table is not closed");
        g.table_[static_cast<std::size_t>(a) * n + b] = c;
      }
    }
    g.finish_validation();
    for (int e = 0; e < n; ++e)
      g.names_.push_back("g" + std::to_string(e));
    g.generators_ = g.default_generators();
    return g;
  }

  int order() const noexcept { return order_; }
  int identity() const noexcept { return identity_; }
  int multiply(int a, int b) const { return table_[static_cast<std::size_t>(a) * order_ + b]; }
  int inverse(int a) const { return inverse_[a]; }
  const std::vector<int>& generators() const noexcept { return generators_; }
  const std::vector<std::string>& generator_names() const noexcept { return generator_names_; }
  const std::string& name(int a) const { return names_[a]; }

  bool is_semidirect() const noexcept { return modulus_ > 0; }
  int modulus() const noexcept { return modulus_; }
  int twist_order() const noexcept { return twist_order_; }

  /// Index of ((a,b),c); coordinates are reduced.
  int element(int a, int b, int c) const
  {
    if (!is_semidirect())
      throw GroupError("group has no semidirect coordinates");
    auto red = [](int v, int m) { return ((v % m) + m) % m; };
    return (red(c, twist_order_) * modulus_ + red(a, modulus_)) * modulus_ + red(b, modulus_);
  }
  std::array<int, 3> coordinates(int e) const
  {
    if (!is_semidirect())
      throw GroupError("group has no semidirect coordinates");
    return {(e / modulus_) % modulus_, e % modulus_, e / (modulus_ * modulus_)};
  }

  /// Evaluates a word such as `z2x3y` left to right over the named generators.
  int word(std::string_view w) const
  {
    int acc = identity_;
    std::size_t pos = 0;
    while (pos < w.size()) {
      char c = w[pos++];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '*')
        continue;
      auto it = std::find(generator_names_.begin(), generator_names_.end(), std::string(1, c));
      if (it == generator_names_.end())
        throw GroupError(std::string("unknown generator '") + c + "' in word");
      int gen = generators_[it - generator_names_.begin()];
      long exp = 0;
      bool digits = false;
      while (pos < w.size() && w[pos] >= '0' && w[pos] <= '9') {
        exp = exp * 10 + (w[pos++] - '0');
        digits = true;
        if (exp > 1000000)
          throw GroupError("exponent too large in word");
      }
      if (!digits)
        exp = 1;
      for (long t = 0; t < exp; ++t)
        acc = multiply(acc, gen);
    }
    return acc;
  }

  /// Subgroup generated by the given elements.
  std::vector<int> generated_subgroup(const std::vector<int>& gens) const
  {
    std::vector<char> in(order_, 0);
    std::vector<int> out{identity_};
    in[identity_] = 1;
    for (std::size_t t = 0; t < out.size(); ++t)
      for (int g : gens) {
        check_element(g);
        int h = multiply(out[t], g);
        if (!in[h]) {
          in[h] = 1;
          out.push_back(h);
        }
      }
    std::sort(out.begin(), out.end());
    return out;
  }

  void check_element(int e) const
  {
    if (e < 0 || e >= order_)
      throw GroupError("element " + std::to_string(e) + " is not in the group");
  }

private:
  friend FiniteGroup semidirect_group(int m, int k, const Matrix2& twist);

  void finish_validation()
  {
    int n = order_;
    identity_ = -1;
    for (int e = 0; e < n && identity_ < 0; ++e) {
      bool ok = true;
      for (int a = 0; a < n && ok; ++a)
        ok = multiply(e, a) == a && multiply(a, e) == a;
      if (ok)
        identity_ = e;
    }
    if (identity_ < 0)
      throw GroupError("multiplication table has no identity");
    inverse_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b)
        if (multiply(a, b) == identity_) {
          inverse_[a] = b;
          break;
        }
      if (inverse_[a] < 0 || multiply(inverse_[a], a) != identity_)
        throw GroupError("element " + std::to_string(a) + " has no inverse");
    }
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          if (multiply(multiply(a, b), c) != multiply(a, multiply(b, c)))
            throw GroupError("multiplication table is not associative");
  }

  // Greedy generating set: each element not yet in the generated subgroup is added.
  std::vector<int> default_generators()
  {
    std::vector<int> gens;
    std::vector<int> sub{identity_};
    for (int e = 0; e < order_; ++e) {
      if (std::binary_search(sub.begin(), sub.end(), e))
        continue;
      gens.push_back(e);
      sub = generated_subgroup(gens);
      generator_names_.push_back(names_[e]);
    }
    return gens;
  }

  int order_ = 0;
  int identity_ = 0;
  std::vector<int> table_;
  std::vector<int> inverse_;
  std::vector<int> generators_;
  std::vector<std::string> generator_names_;
  std::vector<std::string> names_;
  int modulus_ = 0;
  int twist_order_ = 0;
};

namespace detail {

inline Matrix2 mat_mul(const Matrix2& p, const Matrix2& q, int m)
{
  Matrix2 r{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r[i][j] = static_cast<int>((static_cast<long long>(p[i][0]) * q[0][j] +
                                  static_cast<long long>(p[i][1]) * q[1][j]) % m);
  return r;
}

} // namespace detail

/// Z_m^2 x| Z_k with ((a,b),c)((a',b'),c') = ((a,b) + M^c (a',b'), c + c').
inline FiniteGroup semidirect_group(int m, int k, const Matrix2& twist)
{
  if (m < 1 || k < 1)
    throw GroupError("semidirect data needs m >= 1 and k >= 1");
  if (static_cast<long long>(m) * m * k > 20000)
    throw GroupError("semidirect group order m^2*k exceeds 20000");
  Matrix2 mm{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      mm[i][j] = ((twist[i][j] % m) + m) % m;
  long long det = (static_cast<long long>(mm[0][0]) * mm[1][1] -
                   static_cast<long long>(mm[0][1]) * mm[1][0]) % m;
  det = (det + m) % m;
  if (std::gcd(det, static_cast<long long>(m)) != 1)
    throw GroupError("action matrix is not invertible mod " + std::to_string(m));
  std::vector<Matrix2> powers{Matrix2{{{1 % m, 0}, {0, 1 % m}}}};
  for (int c = 1; c <= k; ++c)
    powers.push_back(detail::mat_mul(powers.back(), mm, m));
  if (powers[k] != powers[0])
    throw GroupError("action matrix does not satisfy M^" + std::to_string(k) + " = I mod " +
                     std::to_string(m));

  FiniteGroup g;
  int n = m * m * k;
  g.order_ = n;
  g.modulus_ = m;
  g.twist_order_ = k;
  g.table_.resize(static_cast<std::size_t>(n) * n);
  for (int e = 0; e < n; ++e) {
    auto [a, b, c] = g.coordinates(e);
    for (int f = 0; f < n; ++f) {
      auto [a2, b2, c2] = g.coordinates(f);
      const Matrix2& p = powers[c];
      int na = (a + p[0][0] * a2 + p[0][1] * b2) % m;
      int nb = (b + p[1][0] * a2 + p[1][1] * b2) % m;
      g.table_[static_cast<std::size_t>(e) * n + f] = g.element(na, nb, (c + c2) % k);
    }
  }
  g.identity_ = 0;
  g.inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (g.multiply(a, b) == 0) {
        g.inverse_[a] = b;
        break;
      }
  for (int e = 0; e < n; ++e) {
    auto [a, b, c] = g.coordinates(e);
    g.names_.push_back("((" + std::to_string(a) + "," + std::to_string(b) + ")," +
                       std::to_string(c) + ")");
  }
  g.generators_ = {g.element(1, 0, 0), g.element(0, 1, 0), g.element(0, 0, 1)};
  g.generator_names_ = {"x", "y", "z"};
  return g;
}

/// Left multiplications by the group's generators; identity generators dropped.
inline PermGroup regular_action(const FiniteGroup& g)
{
  std::vector<Permutation> gens;
  for (int s : g.generators()) {
    if (s == g.identity())
      continue;
    Permutation p(g.order());
    for (int h = 0; h < g.order(); ++h)
      p[h] = g.multiply(s, h);
    if (std::find(gens.begin(), gens.end(), p) == gens.end())
      gens.push_back(std::move(p));
  }
  return PermGroup(g.order(), std::move(gens));
}

namespace detail {

inline void check_subgroup(const FiniteGroup& g, const std::vector<int>& h)
{
  if (h.empty())
    throw GroupError("subgroup is empty");
  std::vector<char> in(g.order(), 0);
  for (int e : h) {
    g.check_element(e);
    if (in[e])
      throw GroupError("subgroup lists element " + g.name(e) + " twice");
    in[e] = 1;
  }
  if (!in[g.identity()])
    throw GroupError("subgroup does not contain the identity");
  for (int a : h) {
    if (!in[g.inverse(a)])
      throw GroupError("subgroup is not closed under inverses");
    for (int b : h)
      if (!in[g.multiply(a, b)])
        throw GroupError("subgroup is not closed under multiplication");
  }
}

// Left coset gH of every element, numbered by least element; the identity coset is 0.
inline std::vector<int> left_cosets(const FiniteGroup& g, const std::vector<int>& h, int& count)
{
  check_subgroup(g, h);
  std::vector<int> coset(g.order(), -1);
  count = 0;
  auto assign_from = [&](int e) {
    for (int s : h)
      coset[g.multiply(e, s)] = count;
    ++count;
  };
  assign_from(g.identity());
  for (int e = 0; e < g.order(); ++e)
    if (coset[e] < 0)
      assign_from(e);
  if (static_cast<long long>(count) * static_cast<long long>(h.size()) != g.order())
    throw GroupError("subgroup order does not divide the group order");
  return coset;
}

} // namespace detail

/// Action of the generators on left cosets gH.
inline PermGroup coset_permutation_action(const FiniteGroup& g, const std::vector<int>& h)
{
  int count = 0;
  auto coset = detail::left_cosets(g, h, count);
  std::vector<int> rep(count, -1);
  for (int e = 0; e < g.order(); ++e)
    if (rep[coset[e]] < 0)
      rep[coset[e]] = e;
  std::vector<Permutation> gens;
  for (int s : g.generators()) {
    Permutation p(count);
    for (int c = 0; c < count; ++c)
      p[c] = coset[g.multiply(s, rep[c])];
    bool trivial = true;
    for (int c = 0; c < count; ++c)
      trivial = trivial && p[c] == c;
    if (!trivial && std::find(gens.begin(), gens.end(), p) == gens.end())
      gens.push_back(std::move(p));
  }
  return PermGroup(count, std::move(gens));
}

/// Orbits of the group on ordered pairs: diagonal orbits first by least point,
/// then off-diagonal orbits by least pair.
inline RelationMatrix orbital_configuration(const PermGroup& grp)
{
  int n = grp.degree;
  if (n < 1)
    throw GroupError("permutation group degree must be positive");
  std::vector<int> color(static_cast<std::size_t>(n) * n, -1);
  int next = 0;
  std::vector<std::uint32_t> queue;
  auto flood = [&](int x0, int y0) {
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(x0) * n + y0);
    color[static_cast<std::size_t>(x0) * n + y0] = next;
    for (std::size_t t = 0; t < queue.size(); ++t) {
      int x = static_cast<int>(queue[t] / n), y = static_cast<int>(queue[t] % n);
      for (const auto& p : grp.generators) {
        std::uint32_t key = static_cast<std::uint32_t>(p[x]) * n + p[y];
        if (color[key] < 0) {
          color[key] = next;
          queue.push_back(key);
        }
      }
    }
    ++next;
  };
  for (int x = 0; x < n; ++x)
    if (color[static_cast<std::size_t>(x) * n + x] < 0)
      flood(x, x);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (color[static_cast<std::size_t>(x) * n + y] < 0)
        flood(x, y);
  return RelationMatrix(n, std::move(color));
}

/// Colour of the pair (H, gH), checked to be constant on the double coset HgH.
inline int relation_of_element(const FiniteGroup& g, const std::vector<int>& h,
                               const RelationMatrix& m, int element)
{
  g.check_element(element);
  int count = 0;
  auto coset = detail::left_cosets(g, h, count);
  if (m.order() != count)
    throw GroupError("relation matrix order " + std::to_string(m.order()) +
                     " does not match the number of cosets " + std::to_string(count));
  int color = m(coset[g.identity()], coset[element]);
  for (int s : h)
    for (int t : h) {
      int other = g.multiply(g.multiply(s, element), t);
      if (m(coset[g.identity()], coset[other]) != color)
        throw GroupError("relation matrix is not constant on the double coset of element " +
                         g.name(element));
    }
  return color;
}

/// `degree <n>` followed by `gen <img0> ... <img(n-1)>` lines.
inline PermGroup read_group(std::istream& in)
{
  std::string line;
  int n = -1;
  std::vector<Permutation> gens;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos)
      line.resize(hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head))
      continue;
    auto fail = [&](const std::string& msg) {
      throw GroupError("group file line " + std::to_string(lineno) + ": " + msg);
    };
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok)
      toks.push_back(tok);
    if (head == "degree") {
      if (n >= 0 || toks.size() != 1)
        fail("expected a single 'degree <n>' line");
      n = detail::parse_int_token(toks[0]);
      if (n < 1)
        fail("degree must be positive");
    } else if (head == "gen") {
      if (n < 0)
        fail("'gen' before 'degree'");
      if (static_cast<int>(toks.size()) != n)
        fail("generator needs " + std::to_string(n) + " images");
      Permutation p;
      for (const auto& t : toks)
        p.push_back(detail::parse_int_token(t));
      if (!is_permutation(p))
        fail("generator is not a permutation of 0.." + std::to_string(n - 1));
      gens.push_back(std::move(p));
    } else {
      fail("unknown keyword '" + head + "'");
    }
  }
  if (n < 0)
    throw GroupError("group file has no 'degree' line");
  return PermGroup(n, std::move(gens));
}

inline PermGroup parse_group(const std::string& text)
{
  std::istringstream in(text);
  return read_group(in);
}

inline void write_group(std::ostream& out, const PermGroup& g)
{
  out << "degree " << g.degree << '\n';
  for (const auto& p : g.generators) {
    out << "gen";
    for (int v : p)
      out << ' ' << v;
    out << '\n';
  }
}

/// Parses `a,b,c;a,b,c` into elements ((a,b),c) of a semidirect group.
inline std::vector<int> parse_element_list(const FiniteGroup& g, std::string_view text)
{
  std::vector<int> out;
  for (const auto& part : detail::split(detail::trim(text), ';')) {
    auto coords = detail::split(detail::trim(part), ',');
    if (coords.size() != 3)
      throw GroupError("element '" + detail::trim(part) + "' must be written a,b,c");
    int a = detail::parse_int_token(detail::trim(coords[0]));
    int b = detail::parse_int_token(detail::trim(coords[1]));
    int c = detail::parse_int_token(detail::trim(coords[2]));
    out.push_back(g.element(a, b, c));
  }
  return out;
}

} // namespace isofuse

#endif // ISOFUSE_ORBITALS_HPP
