#ifndef ISOFUSE_POLYNOMIAL_HPP
#define ISOFUSE_POLYNOMIAL_HPP

#include "isofuse/rational.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isofuse {

/// Integer polynomial, coefficients in ascending degree order with no trailing zeros.
class Polynomial
{
public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Integer> ascending)
  : coeffs_(std::move(ascending))
  {
    trim();
  }

  static Polynomial constant(const Integer& c) { return Polynomial(std::vector<Integer>{c}); }
  static Polynomial monomial(const Integer& c, int degree)
  {
    std::vector<Integer> v(degree + 1, Integer(0));
    v[degree] = c;
    return Polynomial(std::move(v));
  }
  static Polynomial x() { return monomial(1, 1); }

  /// Clears denominators, then takes the primitive part with positive leading coefficient.
  static Polynomial from_rational(const std::vector<Rational>& ascending)
  {
    Integer den = 1;
    for (const auto& q : ascending)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    std::vector<Integer> v;
    v.reserve(ascending.size());
    for (const auto& q : ascending)
      v.push_back(Integer(q.get_num() * (den / q.get_den())));
    return Polynomial(std::move(v)).normalized();
  }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Integer>& coefficients() const noexcept { return coeffs_; }
  Integer coefficient(int i) const
  {
    return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[i] : Integer(0);
  }
  const Integer& leading() const
  {
    if (coeffs_.empty())
      throw std::domain_error("zero polynomial has no leading coefficient");
    return coeffs_.back();
  }

  Integer content() const
  {
    Integer g = 0;
    for (const auto& c : coeffs_)
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
  }

  Polynomial normalized() const
  {
    if (is_zero())
      return *this;
    Integer g = content();
    if (coeffs_.back() < 0)
      g = -g;
    std::vector<Integer> v(coeffs_);
    for (auto& c : v)
      mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
    return Polynomial(std::move(v));
  }

  Polynomial derivative() const
  {
    std::vector<Integer> v;
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
      v.push_back(coeffs_[i] * static_cast<unsigned long>(i));
    return Polynomial(std::move(v));
  }

  Integer evaluate(const Integer& t) const
  {
    Integer acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
      acc = acc * t + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b)
  {
    std::vector<Integer> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Integer(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      v[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
      v[i] += b.coeffs_[i];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a)
  {
    std::vector<Integer> v(a.coeffs_);
    for (auto& c : v)
      c = -c;
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b)
  {
    if (a.is_zero() || b.is_zero())
      return {};
    std::vector<Integer> v(a.coeffs_.size() + b.coeffs_.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0)
        continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
        v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  /// Degree first, then coefficients from the constant term up.
  friend bool operator<(const Polynomial& a, const Polynomial& b)
  {
    if (a.degree() != b.degree())
      return a.degree() < b.degree();
    return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(),
                                        b.coeffs_.end());
  }

private:
  void trim()
  {
    while (!coeffs_.empty() && coeffs_.back() == 0)
      coeffs_.pop_back();
  }

  std::vector<Integer> coeffs_;
};

using RationalPolynomial = std::vector<Rational>;

namespace detail {

inline void trim_rational(RationalPolynomial& p)
{
  while (!p.empty() && p.back() == 0)
    p.pop_back();
}

inline RationalPolynomial to_rational(const Polynomial& p)
{
  RationalPolynomial out;
  for (const auto& c : p.coefficients())
    out.emplace_back(c);
  return out;
}

/// Quotient and remainder over the rationals.
inline std::pair<RationalPolynomial, RationalPolynomial> divmod_rational(RationalPolynomial f,
                                                                         const RationalPolynomial& g)
{
  trim_rational(f);
  if (g.empty() || g.back() == 0)
    throw std::domain_error("division by the zero polynomial");
  int dg = static_cast<int>(g.size()) - 1;
  if (static_cast<int>(f.size()) - 1 < dg)
    return {{}, f};
  RationalPolynomial q(f.size() - g.size() + 1, Rational(0));
  for (int d = static_cast<int>(f.size()) - 1; d >= dg; --d) {
    if (f[d] == 0)
      continue;
    Rational t = f[d] / g.back();
    q[d - dg] = t;
    for (int i = 0; i <= dg; ++i)
      f[d - dg + i] -= t * g[i];
  }
  f.resize(dg);
  trim_rational(f);
  trim_rational(q);
  return {q, f};
}

} // namespace detail

/// Exact division in Z[x]; nullopt when g does not divide f with an integral quotient.
inline std::optional<Polynomial> try_divide(const Polynomial& f, const Polynomial& g)
{
  if (g.is_zero())
    throw std::domain_error("division by the zero polynomial");
  if (f.is_zero())
    return Polynomial{};
  if (f.degree() < g.degree())
    return std::nullopt;
  std::vector<Integer> rem(f.coefficients());
  const auto& gc = g.coefficients();
  int dg = g.degree();
  std::vector<Integer> q(f.degree() - dg + 1, Integer(0));
  for (int d = f.degree(); d >= dg; --d) {
    if (rem[d] == 0)
      continue;
    if (!mpz_divisible_p(rem[d].get_mpz_t(), gc.back().get_mpz_t()))
      return std::nullopt;
    Integer t;
    mpz_divexact(t.get_mpz_t(), rem[d].get_mpz_t(), gc.back().get_mpz_t());
    q[d - dg] = t;
    for (int i = 0; i <= dg; ++i)
      rem[d - dg + i] -= t * gc[i];
  }
  for (int i = 0; i < dg; ++i)
    if (rem[i] != 0)
      return std::nullopt;
  return Polynomial(std::move(q));
}

/// Quotient of an exact division; throws if g does not divide f in Z[x].
inline Polynomial divide_exact(const Polynomial& f, const Polynomial& g)
{
  auto q = try_divide(f, g);
  if (!q)
    throw std::logic_error("polynomial division is not exact");
  return *q;
}

/// True iff g divides f over the rationals.
inline bool divides(const Polynomial& g, const Polynomial& f)
{
  if (g.is_zero())
    throw std::domain_error("divisor is the zero polynomial");
  return detail::divmod_rational(detail::to_rational(f), detail::to_rational(g)).second.empty();
}

/// Monic gcd over Q, returned as a primitive polynomial with positive leading coefficient.
inline Polynomial gcd(const Polynomial& f, const Polynomial& g)
{
  Polynomial a = f.normalized(), b = g.normalized();
  while (!b.is_zero()) {
    auto r = detail::divmod_rational(detail::to_rational(a), detail::to_rational(b)).second;
    a = b;
    b = Polynomial::from_rational(r);
  }
  return a.normalized();
}

inline bool is_squarefree(const Polynomial& f)
{
  if (f.degree() <= 0)
    return true;
  return gcd(f, f.derivative()).degree() == 0;
}

/// Discriminant of a cubic a x^3 + b x^2 + c x + d.
inline Integer cubic_discriminant(const Polynomial& f)
{
  if (f.degree() != 3)
    throw std::domain_error("cubic_discriminant needs a degree-3 polynomial");
  Integer a = f.coefficient(3), b = f.coefficient(2), c = f.coefficient(1), d = f.coefficient(0);
  return Integer(18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
                 27 * a * a * d * d);
}

inline long euler_phi(long n)
{
  long result = n;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      while (n % p == 0)
        n /= p;
      result -= result / p;
    }
  if (n > 1)
    result -= result / n;
  return result;
}

inline int moebius(long n)
{
  int mu = 1;
  for (long p = 2; p * p <= n; ++p)
    if (n % p == 0) {
      n /= p;
      if (n % p == 0)
        return 0;
      mu = -mu;
    }
  if (n > 1)
    mu = -mu;
  return mu;
}

/// n-th cyclotomic polynomial as the Moebius quotient of the x^d - 1.
inline Polynomial cyclotomic_polynomial(long n)
{
  if (n < 1)
    throw std::domain_error("cyclotomic index must be positive");
  Polynomial num = Polynomial::constant(1), den = Polynomial::constant(1);
  for (long d = 1; d <= n; ++d) {
    if (n % d != 0)
      continue;
    int mu = moebius(n / d);
    if (mu == 0)
      continue;
    Polynomial term = Polynomial::monomial(1, static_cast<int>(d)) - Polynomial::constant(1);
    (mu > 0 ? num : den) = (mu > 0 ? num : den) * term;
  }
  return divide_exact(num, den);
}

/// Parses `x^3 - 3`, `2*x^2 + x - 1`, `3x`, `-x`; repeated degrees are summed.
inline Polynomial parse_polynomial(std::string_view text)
{
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c)))
      s.push_back(c);
  if (s.empty())
    throw std::invalid_argument("empty polynomial");
  std::vector<Integer> coeffs;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("malformed polynomial '" + std::string(text) + "': " + msg);
  };
  bool first = true;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    std::string digits;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      digits.push_back(s[pos++]);
    Integer c = digits.empty() ? Integer(1) : Integer(digits);
    int degree = 0;
    if (pos < s.size() && s[pos] == '*') {
      if (digits.empty())
        fail("'*' without a coefficient");
      ++pos;
      if (pos >= s.size() || s[pos] != 'x')
        fail("expected 'x' after '*'");
    }
    if (pos < s.size() && s[pos] == 'x') {
      ++pos;
      degree = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        std::string e;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
          e.push_back(s[pos++]);
        if (e.empty() || e.size() > 4)
          fail("bad exponent");
        degree = std::stoi(e);
      }
    } else if (digits.empty()) {
      fail("expected a coefficient or 'x'");
    }
    if (static_cast<int>(coeffs.size()) <= degree)
      coeffs.resize(degree + 1, Integer(0));
    coeffs[degree] += sign * c;
  }
  return Polynomial(std::move(coeffs));
}

inline std::string to_string(const Polynomial& p)
{
  if (p.is_zero())
    return "0";
  std::string out;
  for (int d = p.degree(); d >= 0; --d) {
    const Integer& c = p.coefficients()[d];
    if (c == 0)
      continue;
    Integer mag = abs(c);
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    if (d == 0)
      out += mag.get_str();
    else {
      if (mag != 1)
        out += mag.get_str() + "*";
      out += "x";
      if (d > 1)
        out += "^" + std::to_string(d);
    }
  }
  return out;
}

} // namespace isofuse

#endif // ISOFUSE_POLYNOMIAL_HPP
