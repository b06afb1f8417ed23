#include "support.hpp"

#include "isofuse/report.hpp"

#include <gtest/gtest.h>

using namespace isofuse;

TEST(Fnv1a64, ReferenceVectors)
{
  EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a64_hex("foobar"), "85944171f73967e8");
}

TEST(Report, Header)
{
  RunInfo run{"1.2.3", {"isofuse", "fuse", "--seed", "1"}, "c5.txt", "5\n", true};
  Json h = header_json(run);
  EXPECT_EQ(h["tool"], "isofuse");
  EXPECT_EQ(h["version"], "1.2.3");
  EXPECT_EQ(h["command"].size(), 4u);
  EXPECT_EQ(h["input"]["path"], "c5.txt");
  EXPECT_EQ(h["input"]["fnv1a64"], fnv1a64_hex("5\n"));
  run.has_input = false;
  EXPECT_TRUE(header_json(run)["input"].is_null());
}

TEST(Report, FusionOutcome)
{
  BasedAlgebra c5 = fixtures::cyclic(5);
  FusionOutcome out = minimal_isolating_fusion(c5, parse_seed_family("1,4", 5), true);
  Json j = outcome_json(out);
  EXPECT_EQ(j["status"], "fusion");
  EXPECT_EQ(j["rank"], 3);
  EXPECT_EQ(j["blocks"], Json::parse("[[0],[1,4],[2,3]]"));
  EXPECT_EQ(j["valencies"], Json::parse(R"(["1","2","2"])"));
  EXPECT_EQ(j["fused"]["rank"], 3);
  EXPECT_EQ(j["fingerprint"]["hash"], fingerprint(c5, out.partition).hex());
  EXPECT_FALSE(j.contains("violation"));
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items())
    keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"status", "seed_preserved", "rounds", "rank", "blocks",
                                            "fused", "valencies", "fingerprint"}));
}

TEST(Report, FailedOutcomeCarriesWitness)
{
  BasedAlgebra c5 = fixtures::cyclic(5);
  FusionOutcome out = minimal_isolating_fusion(c5, parse_seed_family("1,2", 5), true);
  Json j = outcome_json(out);
  EXPECT_EQ(j["status"], "failed");
  EXPECT_FALSE(j.contains("fused"));
  ASSERT_TRUE(j.contains("violation"));
  EXPECT_EQ(j["violation"]["seed"], Json::parse("[1,2]"));
  EXPECT_NE(j["violation"]["witness"]["value1"], j["violation"]["witness"]["value2"]);
}

TEST(Report, Spectrum)
{
  BasedAlgebra c5 = fixtures::cyclic(5);
  Json j = spectrum_json(analyse_element(c5, indicator(c5, {1, 4})));
  EXPECT_EQ(j["minimal_polynomial"], "x^3 - x^2 - 3*x + 2");
  EXPECT_EQ(j["degree"], 3);
  EXPECT_EQ(j["factors"].size(), 2u);
  EXPECT_EQ(j["factors"][0]["verdict"], "cyclotomic");
}

TEST(Report, DumpIsStable)
{
  Json j = outcome_json(minimal_isolating_fusion(fixtures::cyclic(5), parse_seed_family("1", 5), true));
  EXPECT_EQ(dump_report(j), dump_report(Json::parse(dump_report(j))));
  EXPECT_EQ(dump_report(j).back(), '\n');
}
