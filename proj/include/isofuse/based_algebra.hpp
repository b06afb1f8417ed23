#ifndef ISOFUSE_BASED_ALGEBRA_HPP
#define ISOFUSE_BASED_ALGEBRA_HPP

#include "isofuse/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace isofuse {

using Permutation = std::vector<int>;
using ElementVector = std::vector<Rational>;
using RationalMatrix = std::vector<std::vector<Rational>>;

/// One nonzero structure constant: b_i b_j contains value * b_k.
struct StructureConstant
{
  int i = 0;
  int j = 0;
  int k = 0;
  Rational value;
};

class AlgebraError : public std::runtime_error
{
public:
  enum class Kind
  {
    index_range,
    duplicate_entry,
    identity_law,
    associativity,
    star_not_involution,
    star_identity,
    star_missing,
    not_scheme_type,
    dimension_mismatch,
  };

  AlgebraError(Kind kind, const std::string& what)
  : std::runtime_error(what), kind_(kind)
  {}

  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

inline bool is_permutation(std::span<const int> p)
{
  std::vector<char> seen(p.size(), 0);
  for (int v : p) {
    if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[v])
      return false;
    seen[v] = 1;
  }
  return true;
}

inline bool is_involution(std::span<const int> p)
{
  if (!is_permutation(p))
    return false;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (static_cast<std::size_t>(p[p[i]]) != i)
      return false;
  return true;
}

class BasedAlgebra;

BasedAlgebra build_algebra(std::vector<StructureConstant> lambda,
                           std::vector<int> identity_support,
                           std::optional<Permutation> star,
                           bool validate,
                           std::optional<int> rank = std::nullopt);

/// A based algebra given by its structure-constant tensor. Immutable once built;
/// construct through build_algebra.
class BasedAlgebra
{
public:
  int rank() const noexcept { return rank_; }
  const std::vector<int>& identity_support() const noexcept { return identity_; }
  bool is_identity(int i) const { return in_identity_[i] != 0; }
  const std::optional<Permutation>& star() const noexcept { return star_; }
  bool has_star() const noexcept { return star_.has_value(); }

  /// Nonzero entries sorted by (i, j, k).
  std::span<const StructureConstant> entries() const noexcept { return entries_; }
  std::size_t nonzeros() const noexcept { return entries_.size(); }

  /// Expansion of b_i b_j.
  std::span<const StructureConstant> product(int i, int j) const
  {
    std::size_t p = pair_index(i, j);
    return std::span<const StructureConstant>(entries_).subspan(
      pair_offset_[p], pair_offset_[p + 1] - pair_offset_[p]);
  }

  /// Positions in entries() whose result index is k.
  std::span<const std::uint32_t> entries_with_result(int k) const
  {
    return std::span<const std::uint32_t>(by_result_).subspan(
      result_offset_[k], result_offset_[k + 1] - result_offset_[k]);
  }

  Rational lambda(int i, int j, int k) const
  {
    check_index(i);
    check_index(j);
    check_index(k);
    auto terms = product(i, j);
    auto it = std::lower_bound(terms.begin(), terms.end(), k,
                               [](const StructureConstant& t, int key) { return t.k < key; });
    if (it != terms.end() && it->k == k)
      return it->value;
    return Rational(0);
  }

  bool all_integral() const noexcept { return integral_; }

  /// Entry values as machine integers, parallel to entries(); empty unless every
  /// value is integral and the sum of their magnitudes stays below 2^62, which
  /// bounds every fused coefficient.
  std::span<const std::int64_t> small_values() const noexcept { return small_values_; }

  ElementVector unit() const
  {
    ElementVector v(rank_, Rational(0));
    for (int e : identity_)
      v[e] = 1;
    return v;
  }

  ElementVector basis_vector(int i) const
  {
    check_index(i);
    ElementVector v(rank_, Rational(0));
    v[i] = 1;
    return v;
  }

  ElementVector multiply(const ElementVector& u, const ElementVector& v) const
  {
    check_length(u);
    check_length(v);
    ElementVector w(rank_, Rational(0));
    Rational scratch;
    for (int i = 0; i < rank_; ++i) {
      if (sgn(u[i]) == 0)
        continue;
      for (int j = 0; j < rank_; ++j) {
        if (sgn(v[j]) == 0)
          continue;
        auto terms = product(i, j);
        if (terms.empty())
          continue;
        Rational uv = u[i] * v[j];
        for (const auto& t : terms) {
          scratch = uv * t.value;
          w[t.k] += scratch;
        }
      }
    }
    return w;
  }

  /// Copy carrying the given involution after checking it against the identity support.
  BasedAlgebra with_star(Permutation star) const
  {
    BasedAlgebra copy = *this;
    copy.star_ = std::move(star);
    copy.check_star();
    return copy;
  }

  void check_index(int i) const
  {
    if (i < 0 || i >= rank_)
      throw AlgebraError(AlgebraError::Kind::index_range,
                         "basis index " + std::to_string(i) + " out of range for rank " +
                           std::to_string(rank_));
  }

  void check_length(const ElementVector& v) const
  {
    if (static_cast<int>(v.size()) != rank_)
      throw AlgebraError(AlgebraError::Kind::dimension_mismatch,
                         "element vector has length " + std::to_string(v.size()) +
                           ", algebra has rank " + std::to_string(rank_));
  }

  friend bool operator==(const BasedAlgebra& a, const BasedAlgebra& b)
  {
    if (a.rank_ != b.rank_ || a.identity_ != b.identity_ || a.star_ != b.star_ ||
        a.entries_.size() != b.entries_.size())
      return false;
    for (std::size_t t = 0; t < a.entries_.size(); ++t) {
      const auto& x = a.entries_[t];
      const auto& y = b.entries_[t];
      if (x.i != y.i || x.j != y.j || x.k != y.k || x.value != y.value)
        return false;
    }
    return true;
  }

private:
  BasedAlgebra() = default;

  friend BasedAlgebra build_algebra(std::vector<StructureConstant>, std::vector<int>,
                                    std::optional<Permutation>, bool, std::optional<int>);

  std::size_t pair_index(int i, int j) const
  {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(rank_) +
           static_cast<std::size_t>(j);
  }

  void index_entries()
  {
    std::size_t pairs = static_cast<std::size_t>(rank_) * static_cast<std::size_t>(rank_);
    pair_offset_.assign(pairs + 1, 0);
    for (const auto& t : entries_)
      ++pair_offset_[pair_index(t.i, t.j) + 1];
    for (std::size_t p = 0; p < pairs; ++p)
      pair_offset_[p + 1] += pair_offset_[p];

    result_offset_.assign(rank_ + 1, 0);
    for (const auto& t : entries_)
      ++result_offset_[t.k + 1];
    for (int k = 0; k < rank_; ++k)
      result_offset_[k + 1] += result_offset_[k];
    by_result_.assign(entries_.size(), 0);
    std::vector<std::size_t> fill(result_offset_.begin(), result_offset_.end() - 1);
    for (std::size_t t = 0; t < entries_.size(); ++t)
      by_result_[fill[entries_[t].k]++] = static_cast<std::uint32_t>(t);

    integral_ = std::all_of(entries_.begin(), entries_.end(),
                            [](const StructureConstant& t) { return is_integer(t.value); });
    small_values_.clear();
    if (integral_) {
      Integer total(0);
      Integer bound(1);
      bound <<= 62;
      for (const auto& t : entries_)
        total += abs(t.value.get_num());
      if (total < bound) {
        small_values_.reserve(entries_.size());
        for (const auto& t : entries_)
          small_values_.push_back(static_cast<std::int64_t>(t.value.get_num().get_si()));
      }
    }
  }

  void check_star() const
  {
    if (!star_)
      return;
    const auto& s = *star_;
    if (static_cast<int>(s.size()) != rank_ || !is_involution(s))
      throw AlgebraError(AlgebraError::Kind::star_not_involution,
                         "star is not an involutive permutation of the basis indices");
    for (int e : identity_)
      if (!in_identity_[s[e]])
        throw AlgebraError(AlgebraError::Kind::star_identity,
                           "star maps identity index " + std::to_string(e) + " to " +
                             std::to_string(s[e]) + " outside the identity support");
  }

  void check_identity_law() const
  {
    std::vector<Rational> acc(rank_);
    std::vector<int> touched;
    for (int j = 0; j < rank_; ++j) {
      for (bool left : {true, false}) {
        touched.clear();
        for (int e : identity_) {
          for (const auto& t : left ? product(e, j) : product(j, e)) {
            touched.push_back(t.k);
            acc[t.k] += t.value;
          }
        }
        int bad = (acc[j] == 1) ? -1 : j;
        for (int k : touched) {
          if (bad < 0 && k != j && sgn(acc[k]) != 0)
            bad = k;
          acc[k] = 0;
        }
        if (bad >= 0)
          throw AlgebraError(AlgebraError::Kind::identity_law,
                             std::string(left ? "left" : "right") +
                               " identity law fails for basis element " + std::to_string(j) +
                               " at coefficient " + std::to_string(bad));
      }
    }
  }

  void check_associativity() const
  {
    std::vector<Rational> lhs(rank_), rhs(rank_);
    std::vector<char> mark(rank_, 0);
    std::vector<int> touched;
    Rational scratch;
    for (int i = 0; i < rank_; ++i) {
      for (int j = 0; j < rank_; ++j) {
        auto ij = product(i, j);
        for (int k = 0; k < rank_; ++k) {
          touched.clear();
          auto touch = [&](int m) {
            if (!mark[m]) {
              mark[m] = 1;
              touched.push_back(m);
            }
          };
          // (b_i b_j) b_k
          for (const auto& t : ij) {
            for (const auto& u : product(t.k, k)) {
              scratch = t.value * u.value;
              lhs[u.k] += scratch;
              touch(u.k);
            }
          }
          // b_i (b_j b_k)
          for (const auto& t : product(j, k)) {
            for (const auto& u : product(i, t.k)) {
              scratch = t.value * u.value;
              rhs[u.k] += scratch;
              touch(u.k);
            }
          }
          int bad = -1;
          for (int m : touched) {
            if (bad < 0 && lhs[m] != rhs[m])
              bad = m;
            lhs[m] = 0;
            rhs[m] = 0;
            mark[m] = 0;
          }
          if (bad >= 0)
            throw AlgebraError(AlgebraError::Kind::associativity,
                               "associativity fails for (b" + std::to_string(i) + " b" +
                                 std::to_string(j) + ") b" + std::to_string(k) +
                                 " at coefficient " + std::to_string(bad));
        }
      }
    }
  }

  int rank_ = 0;
  std::vector<StructureConstant> entries_;
  std::vector<std::size_t> pair_offset_;
  std::vector<std::size_t> result_offset_;
  std::vector<std::uint32_t> by_result_;
  std::vector<int> identity_;
  std::vector<char> in_identity_;
  std::optional<Permutation> star_;
  bool integral_ = true;
  std::vector<std::int64_t> small_values_;
};

inline BasedAlgebra build_algebra(std::vector<StructureConstant> lambda,
                                  std::vector<int> identity_support,
                                  std::optional<Permutation> star,
                                  bool validate,
                                  std::optional<int> rank)
{
  int deduced = 0;
  for (const auto& t : lambda) {
    if (t.i < 0 || t.j < 0 || t.k < 0)
      throw AlgebraError(AlgebraError::Kind::index_range, "negative structure-constant index");
    deduced = std::max({deduced, t.i + 1, t.j + 1, t.k + 1});
  }
  for (int e : identity_support)
    deduced = std::max(deduced, e + 1);
  int r = rank.value_or(deduced);
  if (r <= 0)
    throw AlgebraError(AlgebraError::Kind::index_range, "algebra rank must be positive");
  if (deduced > r)
    throw AlgebraError(AlgebraError::Kind::index_range,
                       "structure-constant index exceeds declared rank " + std::to_string(r));

  std::erase_if(lambda, [](const StructureConstant& t) { return sgn(t.value) == 0; });
  std::sort(lambda.begin(), lambda.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  for (std::size_t t = 1; t < lambda.size(); ++t) {
    const auto& a = lambda[t - 1];
    const auto& b = lambda[t];
    if (a.i == b.i && a.j == b.j && a.k == b.k)
      throw AlgebraError(AlgebraError::Kind::duplicate_entry,
                         "duplicate structure constant (" + std::to_string(a.i) + "," +
                           std::to_string(a.j) + "," + std::to_string(a.k) + ")");
  }

  std::sort(identity_support.begin(), identity_support.end());
  identity_support.erase(std::unique(identity_support.begin(), identity_support.end()),
                         identity_support.end());
  if (identity_support.empty())
    throw AlgebraError(AlgebraError::Kind::identity_law, "identity support is empty");

  BasedAlgebra a;
  a.rank_ = r;
  a.entries_ = std::move(lambda);
  a.identity_ = std::move(identity_support);
  a.in_identity_.assign(r, 0);
  for (int e : a.identity_)
    a.in_identity_[e] = 1;
  a.star_ = std::move(star);
  a.index_entries();
  a.check_star();
  a.check_identity_law();
  if (validate)
    a.check_associativity();
  return a;
}

/// Matrix of left multiplication by sum_i v_i b_i: L[k][j] = sum_i v_i lambda_{ijk}.
inline RationalMatrix left_regular_matrix(const BasedAlgebra& a, const ElementVector& v)
{
  a.check_length(v);
  int r = a.rank();
  RationalMatrix L(r, std::vector<Rational>(r, Rational(0)));
  Rational scratch;
  for (const auto& t : a.entries()) {
    if (sgn(v[t.i]) == 0)
      continue;
    scratch = v[t.i] * t.value;
    L[t.k][t.j] += scratch;
  }
  return L;
}

/// sum over e in E of lambda_{i, i*, e}; the valency n_i for association schemes.
inline Rational valency(const BasedAlgebra& a, int i)
{
  a.check_index(i);
  if (!a.has_star())
    throw AlgebraError(AlgebraError::Kind::star_missing, "valency requires an involution");
  Rational sum(0);
  for (const auto& t : a.product(i, (*a.star())[i]))
    if (a.is_identity(t.k))
      sum += t.value;
  return sum;
}

/// Recovers the pairing i -> i* from the identity coefficients of b_i b_j.
inline Permutation detect_star(const BasedAlgebra& a)
{
  int r = a.rank();
  Permutation star(r, -1);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      Rational s(0);
      for (const auto& t : a.product(i, j))
        if (a.is_identity(t.k))
          s += t.value;
      if (sgn(s) == 0)
        continue;
      if (star[i] >= 0)
        throw AlgebraError(AlgebraError::Kind::not_scheme_type,
                           "basis element " + std::to_string(i) +
                             " pairs with more than one element (" + std::to_string(star[i]) +
                             " and " + std::to_string(j) + ")");
      star[i] = j;
    }
    if (star[i] < 0)
      throw AlgebraError(AlgebraError::Kind::not_scheme_type,
                         "basis element " + std::to_string(i) + " pairs with no element");
  }
  if (!is_involution(star)) {
    for (int i = 0; i < r; ++i)
      if (star[star[i]] != i)
        throw AlgebraError(AlgebraError::Kind::not_scheme_type,
                           "pairing is not involutive at basis element " + std::to_string(i));
  }
  for (int e : a.identity_support())
    if (!a.is_identity(star[e]))
      throw AlgebraError(AlgebraError::Kind::not_scheme_type,
                         "pairing moves identity index " + std::to_string(e));
  return star;
}

// Tensor text format:
//   basedalgebra <rank>
//   identity <e1> <e2> ...        (optional, default 0)
//   star <img0> <img1> ...        (optional)
//   L <i> <j> <k> <num>[/<den>]   (one per nonzero entry)
// Blank lines and lines starting with '#' are ignored.

inline BasedAlgebra read_tensor(std::istream& in, bool validate = true)
{
  std::string line;
  int rank = -1;
  std::vector<int> identity{0};
  std::optional<Permutation> star;
  std::vector<StructureConstant> lambda;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("tensor line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#')
      continue;
    if (rank < 0) {
      if (tag != "basedalgebra" || !(ls >> rank) || rank <= 0)
        fail("expected header 'basedalgebra <rank>'");
      continue;
    }
    if (tag == "identity") {
      identity.clear();
      int e;
      while (ls >> e)
        identity.push_back(e);
      if (!ls.eof())
        fail("malformed identity line");
    } else if (tag == "star") {
      Permutation p;
      int v;
      while (ls >> v)
        p.push_back(v);
      if (!ls.eof())
        fail("malformed star line");
      star = std::move(p);
    } else if (tag == "L") {
      StructureConstant t;
      std::string value;
      if (!(ls >> t.i >> t.j >> t.k >> value))
        fail("expected 'L <i> <j> <k> <value>'");
      std::string extra;
      if (ls >> extra)
        fail("trailing token '" + extra + "'");
      if (t.i < 0 || t.j < 0 || t.k < 0 || t.i >= rank || t.j >= rank || t.k >= rank)
        fail("index out of range");
      try {
        t.value = parse_rational(value);
      } catch (const std::invalid_argument& e) {
        fail(e.what());
      }
      lambda.push_back(std::move(t));
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (rank < 0)
    throw std::invalid_argument("tensor input has no 'basedalgebra' header");
  return build_algebra(std::move(lambda), std::move(identity), std::move(star), validate, rank);
}

inline BasedAlgebra parse_tensor(const std::string& text, bool validate = true)
{
  std::istringstream in(text);
  return read_tensor(in, validate);
}

inline void write_tensor(std::ostream& out, const BasedAlgebra& a)
{
  out << "basedalgebra " << a.rank() << '\n';
  out << "identity";
  for (int e : a.identity_support())
    out << ' ' << e;
  out << '\n';
  if (a.has_star()) {
    out << "star";
    for (int s : *a.star())
      out << ' ' << s;
    out << '\n';
  }
  for (const auto& t : a.entries())
    out << "L " << t.i << ' ' << t.j << ' ' << t.k << ' ' << t.value.get_str() << '\n';
}

inline std::string format_tensor(const BasedAlgebra& a)
{
  std::ostringstream out;
  write_tensor(out, a);
  return out.str();
}

} // namespace isofuse

#endif // ISOFUSE_BASED_ALGEBRA_HPP
