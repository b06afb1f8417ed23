#ifndef ISOFUSE_EIGEN_HPP
#define ISOFUSE_EIGEN_HPP

#include "isofuse/based_algebra.hpp"
#include "isofuse/factor.hpp"
#include "isofuse/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace isofuse {

/// Minimal polynomial of the element v, found as the first linear dependency among
/// 1, v, v^2, ... (the regular representation is faithful, so the unit vector is cyclic
/// enough: p(v) = p(v)*1 vanishes iff p(L_v) does).
inline Polynomial minimal_polynomial(const BasedAlgebra& a, const ElementVector& v)
{
  a.check_length(v);
  int r = a.rank();
  struct Row
  {
    ElementVector vec;
    std::vector<Rational> combo;
    int pivot;
  };
  std::vector<Row> rows;
  ElementVector power = a.unit();
  for (int t = 0; t <= r; ++t) {
    ElementVector w = power;
    std::vector<Rational> combo(t + 1, Rational(0));
    combo[t] = 1;
    for (const auto& row : rows) {
      if (w[row.pivot] == 0)
        continue;
      Rational f = w[row.pivot];
      for (int i = row.pivot; i < r; ++i)
        if (row.vec[i] != 0)
          w[i] -= f * row.vec[i];
      for (std::size_t i = 0; i < row.combo.size(); ++i)
        if (row.combo[i] != 0)
          combo[i] -= f * row.combo[i];
    }
    int pivot = -1;
    for (int i = 0; i < r; ++i)
      if (w[i] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0)
      return Polynomial::from_rational(combo);
    Rational inv = 1 / w[pivot];
    for (int i = pivot; i < r; ++i)
      w[i] *= inv;
    for (auto& c : combo)
      c *= inv;
    // Keep rows fully reduced so later reductions stay triangular.
    for (auto& row : rows) {
      if (row.vec[pivot] == 0)
        continue;
      Rational f = row.vec[pivot];
      for (int i = 0; i < r; ++i)
        if (w[i] != 0)
          row.vec[i] -= f * w[i];
      if (row.combo.size() < combo.size())
        row.combo.resize(combo.size(), Rational(0));
      for (std::size_t i = 0; i < combo.size(); ++i)
        if (combo[i] != 0)
          row.combo[i] -= f * combo[i];
    }
    rows.push_back({std::move(w), std::move(combo), pivot});
    power = a.multiply(v, power);
  }
  throw std::logic_error("Krylov sequence did not become dependent within rank + 1 steps");
}

inline bool is_diagonalizable(const BasedAlgebra& a, const ElementVector& v)
{
  return is_squarefree(minimal_polynomial(a, v));
}

enum class Cyclotomicity
{
  cyclotomic,
  noncyclotomic,
  unknown,
};

inline const char* to_string(Cyclotomicity c)
{
  switch (c) {
    case Cyclotomicity::cyclotomic: return "cyclotomic";
    case Cyclotomicity::noncyclotomic: return "noncyclotomic";
    case Cyclotomicity::unknown: return "unknown";
  }
  return "?";
}

struct CyclotomicVerdict
{
  Cyclotomicity value;
  std::string reason;
};

/// Decides whether the roots of an irreducible polynomial lie in a cyclotomic field,
/// where that can be decided from the degree, the cyclotomic polynomials, or the cubic
/// discriminant.
inline CyclotomicVerdict cyclotomic_verdict(const Polynomial& f)
{
  Polynomial g = f.normalized();
  if (g.degree() < 1)
    throw std::domain_error("cyclotomic_verdict needs a nonconstant polynomial");
  int d = g.degree();
  auto require_irreducible = [&] {
    auto factors = factor_over_rationals(g);
    if (factors.size() != 1 || factors.front().multiplicity != 1)
      throw std::invalid_argument("polynomial " + to_string(g) + " is reducible (divisible by " +
                                  to_string(factors.front().poly) + ")");
  };
  if (d <= 2) {
    require_irreducible();
    return {Cyclotomicity::cyclotomic, "degree <= 2: every quadratic field is cyclotomic"};
  }
  // Cyclotomic polynomials are irreducible, so a match needs no factorization.
  for (long n = 1; n <= 2L * d * d; ++n) {
    if (euler_phi(n) != d)
      continue;
    if (cyclotomic_polynomial(n) == g)
      return {Cyclotomicity::cyclotomic, "equals the cyclotomic polynomial Phi_" + std::to_string(n)};
  }
  require_irreducible();
  if (d == 3) {
    Integer disc = cubic_discriminant(g);
    if (disc > 0 && mpz_perfect_square_p(disc.get_mpz_t()))
      return {Cyclotomicity::cyclotomic,
              "cubic with square discriminant " + disc.get_str() + ": cyclic Galois group"};
    return {Cyclotomicity::noncyclotomic,
            "cubic with non-square discriminant " + disc.get_str() + ": Galois group S3"};
  }
  return {Cyclotomicity::unknown, "abelian-Galois test not implemented above degree 3"};
}

/// Minimal polynomial, its factorization and a verdict per irreducible factor.
struct ElementSpectrum
{
  Polynomial minimal;
  std::vector<Factor> factors;
  std::vector<CyclotomicVerdict> verdicts;
  bool diagonalizable = false;
};

inline ElementSpectrum analyse_element(const BasedAlgebra& a, const ElementVector& v)
{
  ElementSpectrum s;
  s.minimal = minimal_polynomial(a, v);
  s.factors = factor_over_rationals(s.minimal);
  for (const auto& f : s.factors)
    s.verdicts.push_back(cyclotomic_verdict(f.poly));
  s.diagonalizable = is_squarefree(s.minimal);
  return s;
}

/// Characteristic function of an index set.
inline ElementVector indicator(const BasedAlgebra& a, const std::vector<int>& set)
{
  ElementVector v(a.rank(), Rational(0));
  for (int i : set) {
    a.check_index(i);
    v[i] += 1;
  }
  return v;
}

} // namespace isofuse

#endif // ISOFUSE_EIGEN_HPP
