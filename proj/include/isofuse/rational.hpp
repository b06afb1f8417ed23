#ifndef ISOFUSE_RATIONAL_HPP
#define ISOFUSE_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace isofuse {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses `num` or `num/den` (optional sign on the numerator) into a canonical rational.
inline Rational parse_rational(std::string_view text)
{
  if (text.empty())
    throw std::invalid_argument("empty rational literal");
  std::string s(text);
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || ((c == '-' || c == '+') && i == 0);
    if (!ok)
      throw std::invalid_argument("malformed rational literal '" + s + "'");
  }
  if (s[0] == '+')
    s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Order-sensitive 64-bit mixing of a rational into a running hash.
inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v)
{
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}

inline std::uint64_t hash_value(const Integer& z)
{
  std::uint64_t h = static_cast<std::uint64_t>(mpz_sgn(z.get_mpz_t()) + 1);
  std::size_t limbs = mpz_size(z.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i)
    h = hash_combine(h, static_cast<std::uint64_t>(mpz_getlimbn(z.get_mpz_t(), i)));
  return h;
}

inline std::uint64_t hash_value(const Rational& q)
{
  return hash_combine(hash_value(q.get_num()), hash_value(q.get_den()));
}

} // namespace isofuse

#endif // ISOFUSE_RATIONAL_HPP
