#ifndef ISOFUSE_SCHEME_IO_HPP
#define ISOFUSE_SCHEME_IO_HPP

#include "isofuse/based_algebra.hpp"
#include "isofuse/partition.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isofuse {

class FormatError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class CoherenceError : public std::runtime_error
{
public:
  CoherenceError(const std::string& what, int x1, int y1, int x2, int y2)
  : std::runtime_error(what), first_{x1, y1}, second_{x2, y2}
  {}

  std::pair<int, int> first_pair() const noexcept { return first_; }
  std::pair<int, int> second_pair() const noexcept { return second_; }

private:
  std::pair<int, int> first_;
  std::pair<int, int> second_;
};

/// n x n colour matrix whose colours are exactly 0..rank-1.
class RelationMatrix
{
public:
  RelationMatrix(int order, std::vector<int> colors)
  : order_(order), colors_(std::move(colors))
  {
    if (order_ <= 0)
      throw FormatError("relation matrix order must be positive");
    if (colors_.size() != static_cast<std::size_t>(order_) * order_)
      throw FormatError("relation matrix needs order^2 entries");
    int top = -1;
    for (int c : colors_) {
      if (c < 0)
        throw FormatError("negative colour " + std::to_string(c));
      top = std::max(top, c);
    }
    std::vector<char> seen(top + 1, 0);
    for (int c : colors_)
      seen[c] = 1;
    for (int c = 0; c <= top; ++c)
      if (!seen[c])
        throw FormatError("colour " + std::to_string(c) + " does not occur (colours must be 0.." +
                          std::to_string(top) + ")");
    rank_ = top + 1;
  }

  int order() const noexcept { return order_; }
  int rank() const noexcept { return rank_; }
  int operator()(int x, int y) const
  {
    return colors_[static_cast<std::size_t>(x) * order_ + y];
  }
  std::span<const int> row(int x) const
  {
    return std::span<const int>(colors_).subspan(static_cast<std::size_t>(x) * order_, order_);
  }
  const std::vector<int>& colors() const noexcept { return colors_; }

  friend bool operator==(const RelationMatrix&, const RelationMatrix&) = default;

private:
  int order_ = 0;
  int rank_ = 0;
  std::vector<int> colors_;
};

namespace detail {

inline int parse_int_token(const std::string& tok)
{
  std::size_t start = (tok.size() > 1 && (tok[0] == '-' || tok[0] == '+')) ? 1 : 0;
  if (tok.empty() || start == tok.size() ||
      !std::all_of(tok.begin() + start, tok.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw FormatError("non-integer token '" + tok + "'");
  if (tok.size() > 10)
    throw FormatError("integer token '" + tok + "' too large");
  return std::stoi(tok);
}

// Colour files from the published classification use 0 for the diagonal; files
// that number colours from 1 are shifted down.
inline RelationMatrix make_matrix(int n, std::vector<int> values)
{
  if (!values.empty() && *std::min_element(values.begin(), values.end()) == 1)
    for (int& v : values)
      --v;
  return RelationMatrix(n, std::move(values));
}

inline RelationMatrix parse_bracketed(std::string_view text)
{
  std::size_t pos = text.find('[');
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  };
  auto expect = [&](char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw FormatError(std::string("unbalanced brackets: expected '") + c + "'");
    ++pos;
  };
  std::vector<std::vector<int>> rows;
  expect('[');
  skip_ws();
  if (pos < text.size() && text[pos] == ']')
    throw FormatError("empty relation matrix");
  for (;;) {
    expect('[');
    std::vector<int> row;
    for (;;) {
      skip_ws();
      std::string tok;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                   text[pos] == '-' || text[pos] == '+' || text[pos] == '.'))
        tok.push_back(text[pos++]);
      if (tok.empty())
        throw FormatError("expected an integer inside a row");
      row.push_back(parse_int_token(tok));
      skip_ws();
      if (pos >= text.size())
        throw FormatError("unbalanced brackets: row not closed");
      if (text[pos] == ',') {
        ++pos;
        continue;
      }
      if (text[pos] == ']') {
        ++pos;
        break;
      }
      throw FormatError(std::string("unexpected character '") + text[pos] + "' in row");
    }
    rows.push_back(std::move(row));
    skip_ws();
    if (pos >= text.size())
      throw FormatError("unbalanced brackets: matrix not closed");
    if (text[pos] == ',') {
      ++pos;
      continue;
    }
    if (text[pos] == ']') {
      ++pos;
      break;
    }
    throw FormatError(std::string("unexpected character '") + text[pos] + "' between rows");
  }
  skip_ws();
  while (pos < text.size() && (text[pos] == ';' || std::isspace(static_cast<unsigned char>(text[pos]))))
    ++pos;
  if (pos != text.size())
    throw FormatError("trailing characters after relation matrix");
  int n = static_cast<int>(rows.size());
  std::vector<int> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw FormatError("ragged relation matrix: row of length " + std::to_string(row.size()) +
                        " in a matrix with " + std::to_string(n) + " rows");
    values.insert(values.end(), row.begin(), row.end());
  }
  return make_matrix(n, std::move(values));
}

inline RelationMatrix parse_plain(std::string_view text)
{
  std::istringstream in{std::string(text)};
  std::string line;
  int n = -1;
  std::vector<int> values;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok)
      toks.push_back(tok);
    if (toks.empty() || toks[0][0] == '#')
      continue;
    if (n < 0) {
      if (toks.size() != 1)
        throw FormatError("plain relation matrix must start with a line holding the order");
      n = parse_int_token(toks[0]);
      if (n <= 0)
        throw FormatError("relation matrix order must be positive");
      continue;
    }
    if (static_cast<int>(toks.size()) != n)
      throw FormatError("ragged relation matrix: row " + std::to_string(rows) + " has " +
                        std::to_string(toks.size()) + " entries, expected " + std::to_string(n));
    for (const auto& t : toks)
      values.push_back(parse_int_token(t));
    ++rows;
  }
  if (n < 0)
    throw FormatError("empty relation matrix input");
  if (rows != n)
    throw FormatError("relation matrix has " + std::to_string(rows) + " rows, expected " +
                      std::to_string(n));
  return make_matrix(n, std::move(values));
}

} // namespace detail

/// Accepts the plain syntax (order line, then rows) or a bracketed literal
/// `[[...],[...]]`, optionally preceded by an assignment such as `M := `.
inline RelationMatrix parse_relation_matrix(std::string_view text)
{
  if (text.find('[') != std::string_view::npos)
    return detail::parse_bracketed(text);
  if (text.find(']') != std::string_view::npos)
    throw FormatError("unbalanced brackets: ']' without '['");
  return detail::parse_plain(text);
}

inline void write_relation_matrix(std::ostream& out, const RelationMatrix& m)
{
  out << m.order() << '\n';
  for (int x = 0; x < m.order(); ++x) {
    for (int y = 0; y < m.order(); ++y)
      out << (y ? " " : "") << m(x, y);
    out << '\n';
  }
}

inline std::string format_relation_matrix(const RelationMatrix& m)
{
  std::ostringstream out;
  write_relation_matrix(out, m);
  return out.str();
}

/// Intersection numbers of a coloured matrix, with the fibre, transpose and
/// coherence conditions checked on every pair.
inline BasedAlgebra algebra_from_relations(const RelationMatrix& m)
{
  int n = m.order();
  int r = m.rank();

  std::vector<char> diagonal(r, 0), off_diagonal(r, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      (x == y ? diagonal : off_diagonal)[m(x, y)] = 1;
  for (int c = 0; c < r; ++c)
    if (diagonal[c] && off_diagonal[c])
      throw FormatError("colour " + std::to_string(c) +
                        " occurs both on and off the diagonal (fibre condition)");

  std::vector<int> transpose(r, -1);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      int c = m(x, y);
      int t = m(y, x);
      if (transpose[c] < 0)
        transpose[c] = t;
      else if (transpose[c] != t)
        throw FormatError("transpose of colour class " + std::to_string(c) +
                          " is not a colour class");
    }
  }

  // Pairs grouped by colour; the first pair in row-major order represents its colour.
  std::vector<std::size_t> start(r + 1, 0);
  for (int c : m.colors())
    ++start[c + 1];
  for (int c = 0; c < r; ++c)
    start[c + 1] += start[c];
  std::vector<int> pairs(m.colors().size());
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t p = 0; p < m.colors().size(); ++p)
      pairs[fill[m.colors()[p]]++] = static_cast<int>(p);
  }

  std::size_t rr = static_cast<std::size_t>(r) * r;
  std::vector<std::int32_t> count(rr, 0), expect(rr, 0);
  std::vector<std::uint32_t> touched, expected_keys;
  std::vector<StructureConstant> lambda;

  auto count_paths = [&](int x, int y) {
    touched.clear();
    auto rx = m.row(x);
    for (int z = 0; z < n; ++z) {
      std::uint32_t key = static_cast<std::uint32_t>(rx[z]) * r + m(z, y);
      if (count[key]++ == 0)
        touched.push_back(key);
    }
  };

  for (int k = 0; k < r; ++k) {
    int rep = pairs[start[k]];
    int rx = rep / n, ry = rep % n;
    count_paths(rx, ry);
    expected_keys = touched;
    std::sort(expected_keys.begin(), expected_keys.end());
    for (auto key : expected_keys) {
      expect[key] = count[key];
      lambda.push_back({static_cast<int>(key / r), static_cast<int>(key % r), k,
                        Rational(count[key])});
      count[key] = 0;
    }
    for (std::size_t p = start[k] + 1; p < start[k + 1]; ++p) {
      int x = pairs[p] / n, y = pairs[p] % n;
      count_paths(x, y);
      bool same = touched.size() == expected_keys.size();
      for (auto key : touched) {
        if (count[key] != expect[key])
          same = false;
        count[key] = 0;
      }
      if (!same)
        throw CoherenceError("coherence fails for colour " + std::to_string(k) + ": pairs (" +
                               std::to_string(rx) + "," + std::to_string(ry) + ") and (" +
                               std::to_string(x) + "," + std::to_string(y) +
                               ") have different 2-path counts",
                             rx, ry, x, y);
    }
    for (auto key : expected_keys)
      expect[key] = 0;
  }

  std::vector<int> identity;
  for (int c = 0; c < r; ++c)
    if (diagonal[c])
      identity.push_back(c);
  return build_algebra(std::move(lambda), std::move(identity), std::move(transpose), false, r);
}

/// Recolours every entry by the index of its colour's block.
inline RelationMatrix fuse_relations(const RelationMatrix& m, const Partition& p)
{
  if (p.rank() != m.rank())
    throw PartitionError(PartitionError::Kind::rank_mismatch,
                         "partition of rank " + std::to_string(p.rank()) +
                           " does not partition the " + std::to_string(m.rank()) + " colours");
  std::vector<int> colors(m.colors().size());
  for (std::size_t t = 0; t < colors.size(); ++t)
    colors[t] = p.block_of(m.colors()[t]);
  return RelationMatrix(m.order(), std::move(colors));
}

} // namespace isofuse

#endif // ISOFUSE_SCHEME_IO_HPP
