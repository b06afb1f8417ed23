#include "support.hpp"

#include <gtest/gtest.h>

using namespace isofuse;

namespace {

Matrix2 twist{{{2, 1}, {1, 1}}};

/// All elements of <gens>, by closure of composition.
std::vector<Permutation> enumerate_group(const PermGroup& g)
{
  Permutation id(g.degree);
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& s : g.generators) {
        Permutation q(g.degree);
        for (int i = 0; i < g.degree; ++i)
          q[i] = s[p[i]];
        if (seen.insert(q).second)
          next.push_back(q);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

int count_orbits(int n, const std::vector<Permutation>& elements)
{
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int a) { return root[a] == a ? a : root[a] = find(root[a]); };
  for (const auto& p : elements)
    for (int i = 0; i < n; ++i)
      root[find(i)] = find(p[i]);
  int count = 0;
  for (int i = 0; i < n; ++i)
    count += find(i) == i;
  return count;
}

std::vector<PermGroup> group_corpus(std::uint64_t seed, int count)
{
  std::mt19937_64 rng(seed);
  std::vector<PermGroup> out;
  for (int t = 0; t < count; ++t) {
    int n = 2 + fixtures::draw(rng, 9);
    std::vector<Permutation> gens;
    int k = fixtures::draw(rng, 3);
    for (int g = 0; g < k; ++g) {
      Permutation p(n);
      std::iota(p.begin(), p.end(), 0);
      int a = fixtures::draw(rng, n), b = fixtures::draw(rng, n);
      std::swap(p[a], p[b]);
      if (fixtures::draw(rng, 2))
        p = fixtures::random_permutation(rng, n);
      gens.push_back(p);
    }
    out.emplace_back(n, gens);
  }
  out.push_back(coset_permutation_action(semidirect_group(3, 2, Matrix2{{{0, 1}, {1, 0}}}),
                                         {0, semidirect_group(3, 2, Matrix2{{{0, 1}, {1, 0}}})
                                               .element(0, 0, 1)}));
  out.push_back(regular_action(semidirect_group(2, 2, Matrix2{{{0, 1}, {1, 0}}})));
  return out;
}

std::vector<int> valencies(const RelationMatrix& m, const std::vector<int>& colors)
{
  std::vector<int> out;
  for (int c : colors) {
    int v = 0;
    for (int y = 0; y < m.order(); ++y)
      v += m(0, y) == c;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

TEST(SemidirectGroup, OrderNinetySix)
{
  FiniteGroup g = fixtures::g96();
  EXPECT_EQ(g.order(), 96);
  // M^3 = I mod 4 by direct multiplication.
  Matrix2 p{{{1, 0}, {0, 1}}};
  for (int t = 0; t < 3; ++t) {
    Matrix2 q{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        q[i][j] = (p[i][0] * twist[0][j] + p[i][1] * twist[1][j]) % 4;
    p = q;
  }
  EXPECT_EQ(p, (Matrix2{{{1, 0}, {0, 1}}}));
  EXPECT_EQ(g.word("x"), g.element(1, 0, 0));
  EXPECT_EQ(g.word("y"), g.element(0, 1, 0));
  EXPECT_EQ(g.word("z"), g.element(0, 0, 1));
  EXPECT_EQ(g.word("x4"), g.identity());
  EXPECT_EQ(g.word("z6"), g.identity());
  // z v z^-1 = M v: conjugating x gives x^2 y and y gives x y.
  EXPECT_EQ(g.word("zxz5"), g.word("x2y"));
  EXPECT_EQ(g.word("zyz5"), g.word("xy"));
}

TEST(SemidirectGroup, DegenerateAndSwap)
{
  FiniteGroup c5 = semidirect_group(1, 5, Matrix2{{{1, 0}, {0, 1}}});
  EXPECT_EQ(c5.order(), 5);
  FiniteGroup d = semidirect_group(2, 2, Matrix2{{{0, 1}, {1, 0}}});
  EXPECT_EQ(d.order(), 8);
  int n = d.order();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        ASSERT_EQ(d.multiply(d.multiply(a, b), c), d.multiply(a, d.multiply(b, c)));
  for (int a = 0; a < n; ++a) {
    EXPECT_EQ(d.multiply(a, d.inverse(a)), d.identity());
    EXPECT_EQ(d.multiply(d.identity(), a), a);
  }
  EXPECT_NE(d.word("xz"), d.word("zx"));
}

TEST(SemidirectGroup, Errors)
{
  EXPECT_THROW(semidirect_group(4, 2, Matrix2{{{2, 0}, {0, 1}}}), GroupError);
  EXPECT_THROW(semidirect_group(4, 2, twist), GroupError);
  EXPECT_THROW(semidirect_group(0, 2, twist), GroupError);
  EXPECT_THROW(fixtures::g96().word("w"), GroupError);
}

TEST(FromTable, ValidatesAxioms)
{
  FiniteGroup z3 = FiniteGroup::from_table({{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  EXPECT_EQ(z3.order(), 3);
  EXPECT_EQ(z3.inverse(1), 2);
  // A Latin square that is not associative.
  EXPECT_THROW(FiniteGroup::from_table({{0, 1, 2, 3, 4},
                                        {1, 0, 3, 4, 2},
                                        {2, 4, 0, 1, 3},
                                        {3, 2, 4, 0, 1},
                                        {4, 3, 1, 2, 0}}),
               GroupError);
  EXPECT_THROW(FiniteGroup::from_table({{0, 1}, {1, 2}}), GroupError);
}

TEST(RegularAction, Examples)
{
  PermGroup c2 = regular_action(FiniteGroup::from_table({{0, 1}, {1, 0}}));
  EXPECT_EQ(c2.degree, 2);
  ASSERT_EQ(c2.generators.size(), 1u);
  EXPECT_EQ(c2.generators[0], (Permutation{1, 0}));
  PermGroup c5 = regular_action(semidirect_group(1, 5, Matrix2{{{1, 0}, {0, 1}}}));
  EXPECT_EQ(c5.degree, 5);
  ASSERT_EQ(c5.generators.size(), 1u);
  EXPECT_EQ(enumerate_group(c5).size(), 5u);
  PermGroup g96 = regular_action(fixtures::g96());
  EXPECT_EQ(g96.degree, 96);
  EXPECT_EQ(enumerate_group(g96).size(), 96u);
}

TEST(CosetAction, Examples)
{
  FiniteGroup g = fixtures::g96();
  std::vector<int> h = g.generated_subgroup({g.word("z3")});
  EXPECT_EQ(h.size(), 2u);
  EXPECT_EQ(coset_permutation_action(g, h).degree, 48);
  std::vector<int> all(g.order());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_EQ(coset_permutation_action(g, all).degree, 1);
  PermGroup trivial = coset_permutation_action(g, {g.identity()});
  EXPECT_EQ(trivial.degree, 96);
  EXPECT_EQ(orbital_configuration(trivial), orbital_configuration(regular_action(g)));
  EXPECT_THROW(coset_permutation_action(g, {g.identity(), g.word("x")}), GroupError);
  EXPECT_THROW(coset_permutation_action(g, {g.word("z3")}), GroupError);
}

TEST(OrbitalConfiguration, Examples)
{
  RelationMatrix full = orbital_configuration(PermGroup(3, {}));
  EXPECT_EQ(full.rank(), 9);
  EXPECT_EQ(full, fixtures::naive_orbitals(3, {}));
  Permutation to_color(9);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v)
      to_color[fixtures::unit(3, u, v)] = full(u, v);
  EXPECT_EQ(algebra_from_relations(full), fixtures::relabel(fixtures::full_matrix(3), to_color));

  RelationMatrix c5 = orbital_configuration(regular_action(semidirect_group(1, 5, Matrix2{{{1, 0}, {0, 1}}})));
  EXPECT_EQ(c5, fixtures::cyclic_relations(5));

  FiniteGroup g = fixtures::g96();
  RelationMatrix cosets = orbital_configuration(coset_permutation_action(g, g.generated_subgroup({g.word("z3")})));
  std::set<int> diagonal;
  for (int x = 0; x < cosets.order(); ++x)
    diagonal.insert(cosets(x, x));
  EXPECT_EQ(diagonal.size(), 1u);
  EXPECT_NO_THROW(algebra_from_relations(cosets));
}

TEST(RelationOfElement, Examples)
{
  FiniteGroup g = fixtures::g96();
  std::vector<int> h = g.generated_subgroup({g.word("z3")});
  RelationMatrix m = orbital_configuration(coset_permutation_action(g, h));
  EXPECT_EQ(relation_of_element(g, h, m, g.identity()), 0);
  EXPECT_THROW(relation_of_element(g, h, m, 96), GroupError);
  // With the printed twist z^3 is central, so these double cosets are single cosets.
  std::vector<int> colors{relation_of_element(g, h, m, g.word("z2x2")),
                          relation_of_element(g, h, m, g.word("z2x")),
                          relation_of_element(g, h, m, g.word("z2x3y"))};
  EXPECT_EQ(std::set<int>(colors.begin(), colors.end()).size(), 3u);
  EXPECT_EQ(valencies(m, colors), (std::vector<int>{1, 1, 1}));
}

TEST(RelationOfElement, NegatedTwistGivesValenciesOneTwoTwo)
{
  FiniteGroup g = semidirect_group(4, 6, Matrix2{{{2, 3}, {3, 3}}});
  std::vector<int> h = g.generated_subgroup({g.word("z3")});
  RelationMatrix m = orbital_configuration(coset_permutation_action(g, h));
  EXPECT_EQ(m.rank(), 30);
  std::vector<int> colors{relation_of_element(g, h, m, g.word("z2x2")),
                          relation_of_element(g, h, m, g.word("z2x")),
                          relation_of_element(g, h, m, g.word("z2x3y"))};
  EXPECT_EQ(valencies(m, colors), (std::vector<int>{1, 2, 2}));
}

TEST(GroupText, RoundTripAndErrors)
{
  PermGroup g(4, {Permutation{1, 2, 3, 0}, Permutation{1, 0, 2, 3}});
  std::ostringstream out;
  write_group(out, g);
  PermGroup back = parse_group(out.str());
  EXPECT_EQ(back.degree, 4);
  EXPECT_EQ(back.generators, g.generators);
  EXPECT_EQ(parse_group("# comment\ndegree 2\ngen 1 0 # swap\n").generators.size(), 1u);
  EXPECT_THROW(parse_group("gen 1 0\n"), GroupError);
  EXPECT_THROW(parse_group("degree 2\ngen 0 0\n"), GroupError);
  EXPECT_THROW(parse_group("degree 2\ngen 1\n"), GroupError);
  EXPECT_THROW(parse_group("degree 2\ncycle 1 0\n"), GroupError);
  EXPECT_THROW(PermGroup(3, {Permutation{0, 1}}), GroupError);
}

TEST(ElementList, Parses)
{
  FiniteGroup g = fixtures::g96();
  EXPECT_EQ(parse_element_list(g, "0,0,0;0,0,3"), (std::vector<int>{g.identity(), g.word("z3")}));
  EXPECT_EQ(parse_element_list(g, "1,0,0"), std::vector<int>{g.word("x")});
  EXPECT_THROW(parse_element_list(g, "1,0"), GroupError);
}

// Property: orbital configurations are coherent, cover all pairs and have as many
// diagonal colours as point orbits. Seed 0x5eed0401.
TEST(OrbitalsProperty, OrbitalSchemesAreCoherent)
{
  for (const auto& grp : group_corpus(0x5eed0401, 40)) {
    RelationMatrix m = orbital_configuration(grp);
    ASSERT_EQ(m, fixtures::naive_orbitals(grp.degree, grp.generators));
    ASSERT_NO_THROW(algebra_from_relations(m));
    std::map<int, int> sizes;
    std::set<int> diagonal;
    for (int x = 0; x < m.order(); ++x) {
      diagonal.insert(m(x, x));
      for (int y = 0; y < m.order(); ++y)
        ++sizes[m(x, y)];
    }
    int total = 0;
    for (const auto& [c, s] : sizes)
      total += s;
    ASSERT_EQ(total, m.order() * m.order());
    ASSERT_EQ(static_cast<int>(diagonal.size()), count_orbits(grp.degree, grp.generators));
  }
}

// Property: for transitive groups the rank is the number of orbits of a point
// stabilizer. Seed 0x5eed0402.
TEST(OrbitalsProperty, TransitiveRankIsStabilizerOrbitCount)
{
  int checked = 0;
  for (const auto& grp : group_corpus(0x5eed0402, 60)) {
    auto elements = enumerate_group(grp);
    if (count_orbits(grp.degree, elements) != 1)
      continue;
    std::vector<Permutation> stabilizer;
    for (const auto& p : elements)
      if (p[0] == 0)
        stabilizer.push_back(p);
    ASSERT_EQ(orbital_configuration(grp).rank(), count_orbits(grp.degree, stabilizer));
    ++checked;
  }
  FiniteGroup g = semidirect_group(3, 2, Matrix2{{{0, 1}, {1, 0}}});
  PermGroup cosets = coset_permutation_action(g, {g.identity(), g.word("z")});
  auto elements = enumerate_group(cosets);
  std::vector<Permutation> stabilizer;
  for (const auto& p : elements)
    if (p[0] == 0)
      stabilizer.push_back(p);
  EXPECT_EQ(orbital_configuration(cosets).rank(), count_orbits(cosets.degree, stabilizer));
  EXPECT_GT(checked, 5);
}

// Property: relation_of_element is constant on double cosets, exhaustively at order 96.
TEST(OrbitalsProperty, DoubleCosetInvariance)
{
  for (const Matrix2& m : {twist, Matrix2{{{2, 3}, {3, 3}}}}) {
    FiniteGroup g = semidirect_group(4, 6, m);
    std::vector<int> h = g.generated_subgroup({g.word("z3")});
    RelationMatrix rel = orbital_configuration(coset_permutation_action(g, h));
    for (int e = 0; e < g.order(); ++e) {
      int color = relation_of_element(g, h, rel, e);
      for (int s : h)
        for (int t : h)
          ASSERT_EQ(relation_of_element(g, h, rel, g.multiply(g.multiply(s, e), t)), color);
    }
  }
}
