#ifndef ISOFUSE_FACTOR_HPP
#define ISOFUSE_FACTOR_HPP

#include "isofuse/polynomial.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace isofuse {

struct Factor
{
  Polynomial poly;
  int multiplicity = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

namespace detail::modp {

using Poly = std::vector<std::int64_t>;

inline void trim(Poly& a)
{
  while (!a.empty() && a.back() == 0)
    a.pop_back();
}

inline std::int64_t reduce(std::int64_t v, std::int64_t p)
{
  v %= p;
  return v < 0 ? v + p : v;
}

inline std::int64_t power(std::int64_t b, std::int64_t e, std::int64_t p)
{
  std::int64_t r = 1;
  b = reduce(b, p);
  while (e > 0) {
    if (e & 1)
      r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

inline std::int64_t inverse(std::int64_t a, std::int64_t p)
{
  a = reduce(a, p);
  if (a == 0)
    throw std::domain_error("zero has no inverse mod p");
  return power(a, p - 2, p);
}

inline Poly from_integer(const Polynomial& f, std::int64_t p)
{
  Poly out;
  for (const auto& c : f.coefficients())
    out.push_back(static_cast<std::int64_t>(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(p))));
  trim(out);
  return out;
}

inline Poly sub(Poly a, const Poly& b, std::int64_t p)
{
  if (a.size() < b.size())
    a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    a[i] = reduce(a[i] - b[i], p);
  trim(a);
  return a;
}

inline Poly mul(const Poly& a, const Poly& b, std::int64_t p)
{
  if (a.empty() || b.empty())
    return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0)
      continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  trim(r);
  return r;
}

inline std::pair<Poly, Poly> divmod(Poly a, const Poly& b, std::int64_t p)
{
  if (b.empty())
    throw std::domain_error("division by zero polynomial mod p");
  if (a.size() < b.size())
    return {{}, a};
  std::int64_t inv = inverse(b.back(), p);
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t d = a.size(); d-- >= b.size();) {
    std::int64_t t = a[d] * inv % p;
    q[d - b.size() + 1] = t;
    if (t == 0)
      continue;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[d - b.size() + 1 + i] = reduce(a[d - b.size() + 1 + i] - t * b[i], p);
  }
  a.resize(b.size() - 1);
  trim(a);
  trim(q);
  return {q, a};
}

inline Poly monic(Poly a, std::int64_t p)
{
  if (a.empty())
    return a;
  std::int64_t inv = inverse(a.back(), p);
  for (auto& c : a)
    c = c * inv % p;
  return a;
}

inline Poly gcd(Poly a, Poly b, std::int64_t p)
{
  while (!b.empty()) {
    Poly r = divmod(a, b, p).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a, p);
}

/// s, t with s*a + t*b = 1 mod p, for coprime a and b.
inline std::pair<Poly, Poly> bezout(const Poly& a, const Poly& b, std::int64_t p)
{
  Poly r0 = a, r1 = b, s0{1}, s1{}, t0{}, t1{1};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1, p);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.size() != 1)
    throw std::logic_error("bezout called on non-coprime polynomials");
  std::int64_t inv = inverse(r0[0], p);
  for (auto& c : s0)
    c = c * inv % p;
  for (auto& c : t0)
    c = c * inv % p;
  return {s0, t0};
}

inline Poly powmod(Poly base, const Integer& e, const Poly& m, std::int64_t p)
{
  Poly result{1};
  base = divmod(base, m, p).second;
  for (std::size_t bit = mpz_sizeinbase(e.get_mpz_t(), 2); bit-- > 0;) {
    result = divmod(mul(result, result, p), m, p).second;
    if (mpz_tstbit(e.get_mpz_t(), bit))
      result = divmod(mul(result, base, p), m, p).second;
  }
  return result;
}

inline Poly derivative(const Poly& a, std::int64_t p)
{
  Poly d;
  for (std::size_t i = 1; i < a.size(); ++i)
    d.push_back(a[i] * static_cast<std::int64_t>(i % p) % p);
  trim(d);
  return d;
}

// Distinct-degree then equal-degree splitting (odd p); returns monic irreducibles.
inline std::vector<Poly> factor_squarefree(Poly f, std::int64_t p, std::mt19937_64& rng)
{
  f = monic(f, p);
  std::vector<std::pair<Poly, int>> by_degree;
  Poly h{0, 1};
  Poly xpoly{0, 1};
  for (int d = 1; 2 * d <= static_cast<int>(f.size()) - 1; ++d) {
    h = powmod(h, Integer(p), f, p);
    Poly g = gcd(f, sub(h, xpoly, p), p);
    if (g.size() > 1) {
      by_degree.emplace_back(g, d);
      f = divmod(f, g, p).first;
      h = divmod(h, f, p).second;
    }
  }
  if (f.size() > 1)
    by_degree.emplace_back(f, static_cast<int>(f.size()) - 1);

  std::vector<Poly> out;
  for (auto& [g, d] : by_degree) {
    std::vector<Poly> work{g};
    while (!work.empty()) {
      Poly u = work.back();
      work.pop_back();
      if (static_cast<int>(u.size()) - 1 == d) {
        out.push_back(u);
        continue;
      }
      Integer pd;
      mpz_ui_pow_ui(pd.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(d));
      Integer e = (pd - 1) / 2;
      for (;;) {
        Poly a(u.size() - 1);
        std::uniform_int_distribution<std::int64_t> coin(0, p - 1);
        for (auto& c : a)
          c = coin(rng);
        trim(a);
        if (a.size() < 2)
          continue;
        Poly b = sub(powmod(a, e, u, p), Poly{1}, p);
        Poly g2 = gcd(u, b, p);
        if (g2.size() > 1 && g2.size() < u.size()) {
          work.push_back(divmod(u, g2, p).first);
          work.back() = monic(work.back(), p);
          work.push_back(g2);
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace detail::modp

namespace detail {

using IntPoly = std::vector<Integer>;

inline IntPoly reduce_mod(IntPoly a, const Integer& m)
{
  for (auto& c : a)
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t());
  while (!a.empty() && a.back() == 0)
    a.pop_back();
  return a;
}

inline IntPoly mul_mod(const IntPoly& a, const IntPoly& b, const Integer& m)
{
  if (a.empty() || b.empty())
    return {};
  IntPoly r(a.size() + b.size() - 1, Integer(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] += a[i] * b[j];
  return reduce_mod(std::move(r), m);
}

inline IntPoly lift_small(const modp::Poly& a)
{
  IntPoly out;
  for (auto c : a)
    out.emplace_back(static_cast<long>(c));
  return out;
}

inline modp::Poly down_small(const IntPoly& a, std::int64_t p)
{
  modp::Poly out;
  for (const auto& c : a)
    out.push_back(static_cast<std::int64_t>(mpz_fdiv_ui(c.get_mpz_t(), static_cast<unsigned long>(p))));
  modp::trim(out);
  return out;
}

// Lifts g = a*b (mod p, a monic) to g = A*B (mod p^e).
inline std::pair<IntPoly, IntPoly> hensel_pair(const IntPoly& g, const modp::Poly& a,
                                               const modp::Poly& b, std::int64_t p, int e,
                                               const Integer& modulus)
{
  auto [s, t] = modp::bezout(a, b, p);
  IntPoly big_a = lift_small(a), big_b = lift_small(b);
  Integer pk = p;
  for (int k = 1; k < e; ++k) {
    IntPoly prod = mul_mod(big_a, big_b, modulus);
    IntPoly c(std::max(g.size(), prod.size()), Integer(0));
    for (std::size_t i = 0; i < g.size(); ++i)
      c[i] += g[i];
    for (std::size_t i = 0; i < prod.size(); ++i)
      c[i] -= prod[i];
    c = reduce_mod(std::move(c), modulus);
    for (auto& v : c)
      mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), pk.get_mpz_t());
    modp::Poly cs = down_small(c, p);
    auto [q, tau] = modp::divmod(modp::mul(t, cs, p), a, p);
    modp::Poly sigma = modp::mul(s, cs, p);
    modp::Poly qb = modp::mul(q, b, p);
    if (sigma.size() < qb.size())
      sigma.resize(qb.size(), 0);
    for (std::size_t i = 0; i < qb.size(); ++i)
      sigma[i] = (sigma[i] + qb[i]) % p;
    modp::trim(sigma);
    IntPoly ta = lift_small(tau), sb = lift_small(sigma);
    if (big_a.size() < ta.size())
      big_a.resize(ta.size(), Integer(0));
    for (std::size_t i = 0; i < ta.size(); ++i)
      big_a[i] += pk * ta[i];
    if (big_b.size() < sb.size())
      big_b.resize(sb.size(), Integer(0));
    for (std::size_t i = 0; i < sb.size(); ++i)
      big_b[i] += pk * sb[i];
    pk *= p;
    big_a = reduce_mod(std::move(big_a), modulus);
    big_b = reduce_mod(std::move(big_b), modulus);
  }
  return {big_a, big_b};
}

inline std::vector<IntPoly> hensel_lift(IntPoly g, std::vector<modp::Poly> factors, std::int64_t p,
                                        int e, const Integer& modulus)
{
  std::vector<IntPoly> out;
  while (factors.size() > 1) {
    modp::Poly a = factors.front();
    modp::Poly rest{static_cast<std::int64_t>(
      mpz_fdiv_ui(g.back().get_mpz_t(), static_cast<unsigned long>(p)))};
    for (std::size_t i = 1; i < factors.size(); ++i)
      rest = modp::mul(rest, factors[i], p);
    auto [big_a, big_b] = hensel_pair(g, a, rest, p, e, modulus);
    out.push_back(std::move(big_a));
    g = std::move(big_b);
    factors.erase(factors.begin());
  }
  Integer inv;
  mpz_invert(inv.get_mpz_t(), g.back().get_mpz_t(), modulus.get_mpz_t());
  for (auto& c : g)
    c *= inv;
  out.push_back(reduce_mod(std::move(g), modulus));
  return out;
}

inline Polynomial symmetric(IntPoly a, const Integer& modulus)
{
  Integer half = modulus / 2;
  for (auto& c : a) {
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
    if (c > half)
      c -= modulus;
  }
  return Polynomial(std::move(a));
}

inline bool next_combination(std::vector<int>& idx, int n)
{
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i)
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j)
        idx[j] = idx[j - 1] + 1;
      return true;
    }
  return false;
}

// Irreducible factors of a primitive squarefree polynomial of degree >= 2.
inline std::vector<Polynomial> zassenhaus(Polynomial g)
{
  static constexpr std::int64_t primes[] = {3,   5,   7,   11,  13,  17,  19,  23,  29,  31,  37,
                                            41,  43,  47,  53,  59,  61,  67,  71,  73,  79,  83,
                                            89,  97,  101, 103, 107, 109, 113, 127, 131, 137, 139,
                                            149, 151, 157, 163, 167, 173, 179, 181, 191, 193, 197,
                                            199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263};
  std::mt19937_64 rng(0x5eedf00dULL);
  std::int64_t best_p = 0;
  std::vector<modp::Poly> best;
  int good = 0;
  for (std::int64_t p : primes) {
    if (mpz_fdiv_ui(g.leading().get_mpz_t(), static_cast<unsigned long>(p)) == 0)
      continue;
    modp::Poly gp = modp::from_integer(g, p);
    if (modp::gcd(gp, modp::derivative(gp, p), p).size() != 1)
      continue;
    auto fs = modp::factor_squarefree(gp, p, rng);
    if (best_p == 0 || fs.size() < best.size()) {
      best_p = p;
      best = std::move(fs);
    }
    if (best.size() == 1 || ++good == 5)
      break;
  }
  if (best_p == 0)
    throw std::runtime_error("no suitable prime found for factorization");
  if (best.size() == 1)
    return {g};

  // Factor coefficients are bounded by 2^deg * |g|_1; the lifted modulus must exceed
  // twice that times the leading coefficient.
  Integer norm = 0;
  for (const auto& c : g.coefficients())
    norm += abs(c);
  Integer bound = norm * abs(g.leading()) * 2;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), static_cast<mp_bitcnt_t>(g.degree()));
  int e = 1;
  Integer modulus = best_p;
  while (modulus <= bound) {
    modulus *= best_p;
    ++e;
  }
  IntPoly gi = reduce_mod(g.coefficients(), modulus);
  std::vector<IntPoly> lifted = hensel_lift(gi, best, best_p, e, modulus);

  std::vector<Polynomial> found;
  int s = 1;
  while (2 * s <= static_cast<int>(lifted.size())) {
    bool progress = false;
    std::vector<int> idx(s);
    for (int i = 0; i < s; ++i)
      idx[i] = i;
    do {
      IntPoly cand{g.leading()};
      for (int i : idx)
        cand = mul_mod(cand, lifted[i], modulus);
      Polynomial h = symmetric(cand, modulus).normalized();
      if (h.degree() < 1)
        continue;
      auto q = try_divide(g, h);
      if (!q)
        continue;
      found.push_back(h);
      g = q->normalized();
      for (int t = s - 1; t >= 0; --t)
        lifted.erase(lifted.begin() + idx[t]);
      progress = true;
      break;
    } while (next_combination(idx, static_cast<int>(lifted.size())));
    if (!progress)
      ++s;
  }
  if (g.degree() >= 1)
    found.push_back(g.normalized());
  return found;
}

} // namespace detail

/// Irreducible factors over Q with multiplicities, primitive with positive leading
/// coefficient, sorted by degree then coefficients.
inline std::vector<Factor> factor_over_rationals(const Polynomial& f, int degree_cap = 64)
{
  if (f.is_zero())
    throw std::domain_error("cannot factor the zero polynomial");
  if (f.degree() > degree_cap)
    throw std::domain_error("polynomial degree " + std::to_string(f.degree()) +
                            " exceeds the factorization cap " + std::to_string(degree_cap));
  std::vector<Factor> out;
  Polynomial g = f.normalized();
  if (g.degree() < 1)
    return out;

  // Yun's squarefree decomposition.
  std::vector<std::pair<Polynomial, int>> parts;
  Polynomial a0 = gcd(g, g.derivative());
  Polynomial b = divide_exact(g, a0);
  Polynomial c = divide_exact(g.derivative(), a0);
  Polynomial d = c - b.derivative();
  for (int i = 1; b.degree() > 0; ++i) {
    Polynomial ai = gcd(b, d);
    b = divide_exact(b, ai);
    c = divide_exact(d, ai);
    d = c - b.derivative();
    if (ai.degree() > 0)
      parts.emplace_back(ai.normalized(), i);
  }

  for (auto& [part, mult] : parts) {
    if (part.degree() == 1) {
      out.push_back({part, mult});
      continue;
    }
    for (auto& h : detail::zassenhaus(part))
      out.push_back({h.normalized(), mult});
  }
  std::sort(out.begin(), out.end(), [](const Factor& x, const Factor& y) {
    if (!(x.poly == y.poly))
      return x.poly < y.poly;
    return x.multiplicity < y.multiplicity;
  });
  return out;
}

} // namespace isofuse

#endif // ISOFUSE_FACTOR_HPP
