#ifndef ISOFUSE_REPORT_HPP
#define ISOFUSE_REPORT_HPP

#include "isofuse/based_algebra.hpp"
#include "isofuse/eigen.hpp"
#include "isofuse/fusion.hpp"
#include "isofuse/lattice.hpp"
#include "isofuse/partition.hpp"

#include "json.hpp"

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace isofuse {

using Json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(std::string_view bytes)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RunInfo
{
  std::string version;
  std::vector<std::string> command;
  std::string input_path;
  /// Empty when the command reads no input file.
  std::string input_content;
  bool has_input = false;
};

inline Json header_json(const RunInfo& run)
{
  Json j;
  j["tool"] = "isofuse";
  j["version"] = run.version;
  j["command"] = run.command;
  if (run.has_input)
    j["input"] = {{"path", run.input_path}, {"fnv1a64", fnv1a64_hex(run.input_content)}};
  else
    j["input"] = nullptr;
  return j;
}

inline Json partition_json(const Partition& p)
{
  Json j = Json::array();
  for (const auto& b : p.blocks())
    j.push_back(b);
  return j;
}

inline Json seeds_json(const SeedFamily& s)
{
  Json j = Json::array();
  for (const auto& set : s.sets())
    j.push_back(set);
  return j;
}

inline Json algebra_json(const BasedAlgebra& a)
{
  Json j;
  j["rank"] = a.rank();
  j["identity"] = a.identity_support();
  j["star"] = a.has_star() ? Json(*a.star()) : Json(nullptr);
  Json terms = Json::array();
  for (const auto& t : a.entries())
    terms.push_back({t.i, t.j, t.k, t.value.get_str()});
  j["constants"] = std::move(terms);
  return j;
}

inline Json fingerprint_json(const Fingerprint& fp)
{
  Json classes = Json::array();
  for (const auto& [val, poly] : fp.classes)
    classes.push_back({{"valency", val}, {"minimal_polynomial", poly}});
  Json constants = Json::array();
  for (const auto& c : fp.constants)
    constants.push_back(c.get_str());
  return {{"hash", fp.hex()}, {"rank", fp.rank}, {"classes", classes}, {"constants", constants}};
}

inline Json violation_json(const SeedViolation& v)
{
  Json j;
  j["seed"] = v.seed;
  j["left_block"] = v.left;
  j["right_block"] = v.right;
  if (v.first >= 0) {
    j["witness"] = {{"k1", v.first},
                    {"k2", v.second},
                    {"value1", v.first_value.get_str()},
                    {"value2", v.second_value.get_str()}};
  }
  j["reason"] = v.reason;
  return j;
}

inline Json outcome_json(const FusionOutcome& out)
{
  Json j;
  j["status"] = to_string(out.status);
  j["seed_preserved"] = out.seed_preserved;
  j["rounds"] = out.rounds;
  j["rank"] = out.partition.size();
  j["blocks"] = partition_json(out.partition);
  if (out.fused) {
    j["fused"] = algebra_json(*out.fused);
    if (out.fused->has_star()) {
      Json vals = Json::array();
      for (int b = 0; b < out.fused->rank(); ++b)
        vals.push_back(valency(*out.fused, b).get_str());
      j["valencies"] = std::move(vals);
    }
    j["fingerprint"] = fingerprint_json(algebra_fingerprint(*out.fused));
  }
  if (out.violation)
    j["violation"] = violation_json(*out.violation);
  return j;
}

inline Json spectrum_json(const ElementSpectrum& s)
{
  Json factors = Json::array();
  for (std::size_t t = 0; t < s.factors.size(); ++t)
    factors.push_back({{"factor", to_string(s.factors[t].poly)},
                       {"multiplicity", s.factors[t].multiplicity},
                       {"verdict", to_string(s.verdicts[t].value)},
                       {"reason", s.verdicts[t].reason}});
  return {{"minimal_polynomial", to_string(s.minimal)},
          {"degree", s.minimal.degree()},
          {"diagonalizable", s.diagonalizable},
          {"factors", factors}};
}

inline std::string dump_report(const Json& j)
{
  return j.dump(2) + "\n";
}

} // namespace isofuse

#endif // ISOFUSE_REPORT_HPP
