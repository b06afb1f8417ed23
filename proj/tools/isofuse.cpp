#include "isofuse/isofuse.hpp"
#include "isofuse/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef ISOFUSE_VERSION
#define ISOFUSE_VERSION "0.0.0"
#endif

namespace {

using namespace isofuse;

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_input = 2;

class InputError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot read input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw InputError("cannot write output file '" + path + "'");
  out << text;
}

struct Input
{
  std::string scheme;
  std::string tensor;
  bool associativity = false;
};

struct Loaded
{
  RunInfo run;
  std::optional<BasedAlgebra> algebra;
  std::optional<RelationMatrix> matrix;
};

RunInfo base_run(const std::vector<std::string>& argv)
{
  RunInfo run;
  run.version = ISOFUSE_VERSION;
  run.command = argv;
  return run;
}

Loaded load(const Input& in, const std::vector<std::string>& argv)
{
  if (in.scheme.empty() == in.tensor.empty())
    throw InputError("exactly one of --scheme or --tensor is required");
  Loaded out;
  out.run = base_run(argv);
  out.run.has_input = true;
  out.run.input_path = in.scheme.empty() ? in.tensor : in.scheme;
  out.run.input_content = read_file(out.run.input_path);
  if (!in.scheme.empty()) {
    out.matrix = parse_relation_matrix(out.run.input_content);
    out.algebra = algebra_from_relations(*out.matrix);
  } else {
    out.algebra = parse_tensor(out.run.input_content, in.associativity);
  }
  return out;
}

void add_input_options(CLI::App* cmd, Input& in)
{
  cmd->add_option("--scheme", in.scheme, "relation-matrix file (plain or bracketed syntax)");
  cmd->add_option("--tensor", in.tensor, "structure-constant tensor file");
}

std::vector<int> parse_int_list(const std::string& text, std::size_t expected, const char* what)
{
  std::vector<int> out;
  for (const auto& tok : detail::split(text, ','))
    out.push_back(detail::parse_int_token(detail::trim(tok)));
  if (out.size() != expected)
    throw InputError(std::string(what) + " needs " + std::to_string(expected) +
                     " comma-separated integers");
  return out;
}

// fuse ----------------------------------------------------------------------

struct FuseArgs
{
  Input input;
  std::string seed;
  std::string mode = "fusion";
  bool relaxed = false;
  std::string out;
  std::string fused_matrix;
  std::string fused_tensor;
};

int run_fuse(const FuseArgs& args, const std::vector<std::string>& argv)
{
  auto loaded = load(args.input, argv);
  const BasedAlgebra& a = *loaded.algebra;
  SeedFamily seeds = parse_seed_family(args.seed, a.rank());
  bool strict = !args.relaxed;
  FusionOutcome outcome = args.mode == "fusion" ? minimal_isolating_fusion(a, seeds, strict)
                                                : minimal_isolating_semifusion(a, seeds, strict);
  Json report = header_json(loaded.run);
  report["command_name"] = "fuse";
  report["mode"] = args.mode;
  report["strict"] = strict;
  report["seeds"] = seeds_json(seeds);
  report["base_rank"] = a.rank();
  Json result = outcome_json(outcome);
  for (auto& [k, v] : result.items())
    report[k] = v;
  write_output(args.out, dump_report(report));
  if (outcome.status != FusionStatus::failed) {
    if (!args.fused_matrix.empty()) {
      if (!loaded.matrix)
        throw InputError("--fused-matrix needs a --scheme input");
      write_output(args.fused_matrix,
                   format_relation_matrix(fuse_relations(*loaded.matrix, outcome.partition)));
    }
    if (!args.fused_tensor.empty())
      write_output(args.fused_tensor, format_tensor(*outcome.fused));
  }
  return outcome.status == FusionStatus::failed ? exit_failed : exit_ok;
}

// lattice / search -------------------------------------------------------------

Json found_list_json(const BasedAlgebra& a, const std::vector<FoundFusion>& found, int jobs,
                     Json& classes_out)
{
  auto classes = group_by_fingerprint(a, found, jobs);
  std::vector<std::size_t> class_of(found.size());
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (auto m : classes[c].members)
      class_of[m] = c;
  Json list = Json::array();
  for (std::size_t t = 0; t < found.size(); ++t) {
    Json seeds = Json::array();
    for (const auto& s : found[t].seeds)
      seeds.push_back(seeds_json(s));
    list.push_back({{"seed", seeds_json(found[t].seeds.front())},
                    {"all_seeds", seeds},
                    {"blocks", partition_json(found[t].partition)},
                    {"rank", found[t].partition.size()},
                    {"fingerprint", classes[class_of[t]].fingerprint.hex()},
                    {"status", to_string(found[t].outcome.status)}});
  }
  classes_out = Json::array();
  for (const auto& c : classes) {
    Json members = Json::array();
    for (auto m : c.members)
      members.push_back(partition_json(found[m].partition));
    classes_out.push_back({{"fingerprint", fingerprint_json(c.fingerprint)},
                           {"exponent", c.members.size()},
                           {"partitions", members}});
  }
  return list;
}

struct LatticeArgs
{
  Input input;
  int max_seed_size = 1;
  int multi = 0;
  bool combine_any = false;
  bool automorphisms = false;
  int jobs = 1;
  std::string out;
  std::string dot;
};

int run_lattice(const LatticeArgs& args, const std::vector<std::string>& argv)
{
  auto loaded = load(args.input, argv);
  const BasedAlgebra& a = *loaded.algebra;
  EnumerationOptions opt;
  opt.max_seed_size = args.max_seed_size;
  opt.multi = args.multi;
  opt.combine_any = args.combine_any;
  opt.jobs = args.jobs;
  auto found = enumerate_seed_fusions(a, opt);
  Json report = header_json(loaded.run);
  report["command_name"] = "lattice";
  report["max_seed_size"] = args.max_seed_size;
  report["multi"] = args.multi;
  report["combine_any"] = args.combine_any;
  Json classes;
  report["fusions"] = found_list_json(a, found, args.jobs, classes);
  report["classes"] = classes;
  std::vector<Partition> parts;
  for (const auto& f : found)
    parts.push_back(f.partition);
  LatticeGraph graph = build_fusion_lattice(a, parts, args.jobs);
  Json nodes = Json::array();
  for (const auto& n : graph.nodes)
    nodes.push_back({{"blocks", partition_json(n.partition)}, {"fingerprint", n.fingerprint.hex()}});
  Json edges = Json::array();
  for (const auto& [x, y] : graph.edges)
    edges.push_back({x, y});
  report["lattice"] = {{"nodes", nodes}, {"edges", edges}};
  if (args.automorphisms) {
    auto group = algebraic_automorphism_group(a);
    report["automorphisms"] = {{"order", group.size()}, {"elements", group}};
  }
  write_output(args.out, dump_report(report));
  if (!args.dot.empty())
    write_output(args.dot, emit_lattice_dot(graph));
  return exit_ok;
}

struct SearchArgs
{
  Input input;
  int samples = 100;
  std::string size_range = "1,3";
  int family_size = 1;
  std::optional<std::uint64_t> rng_seed;
  std::vector<std::string> planted;
  int jobs = 1;
  std::string out;
};

int run_search(const SearchArgs& args, const std::vector<std::string>& argv)
{
  if (!args.rng_seed)
    throw InputError("--rng-seed is required for reproducible sampling");
  auto loaded = load(args.input, argv);
  const BasedAlgebra& a = *loaded.algebra;
  auto range = parse_int_list(args.size_range, 2, "--size-range");
  SearchOptions opt;
  opt.samples = args.samples;
  opt.min_size = range[0];
  opt.max_size = range[1];
  opt.family_size = args.family_size;
  opt.rng_seed = *args.rng_seed;
  opt.jobs = args.jobs;
  for (const auto& p : args.planted)
    opt.planted.push_back(parse_seed_family(p, a.rank()));
  auto found = random_seed_search(a, opt);
  Json report = header_json(loaded.run);
  report["command_name"] = "search";
  report["samples"] = args.samples;
  report["size_range"] = range;
  report["family_size"] = args.family_size;
  report["rng"] = {{"engine", "mt19937_64"}, {"seed", *args.rng_seed}};
  Json classes;
  report["fusions"] = found_list_json(a, found, args.jobs, classes);
  report["classes"] = classes;
  write_output(args.out, dump_report(report));
  return exit_ok;
}

// orbitals ---------------------------------------------------------------------

struct OrbitalArgs
{
  std::string group;
  std::string semidirect;
  std::string subgroup;
  std::string words;
  std::string out;
  std::string report;
};

int run_orbitals(const OrbitalArgs& args, const std::vector<std::string>& argv)
{
  if (args.group.empty() == args.semidirect.empty())
    throw InputError("exactly one of --group or --semidirect is required");
  RunInfo run = base_run(argv);
  RelationMatrix m(1, {0});
  std::optional<FiniteGroup> grp;
  std::vector<int> sub;
  Json report;
  if (!args.group.empty()) {
    if (!args.subgroup.empty() || !args.words.empty())
      throw InputError("--subgroup and --words need --semidirect");
    run.has_input = true;
    run.input_path = args.group;
    run.input_content = read_file(args.group);
    PermGroup g = parse_group(run.input_content);
    m = orbital_configuration(g);
    report = header_json(run);
    report["degree"] = g.degree;
    report["generators"] = g.generators.size();
  } else {
    auto d = parse_int_list(args.semidirect, 6, "--semidirect");
    grp = semidirect_group(d[0], d[1], Matrix2{{{d[2], d[3]}, {d[4], d[5]}}});
    if (args.subgroup.empty())
      sub = {grp->identity()};
    else
      sub = grp->generated_subgroup(parse_element_list(*grp, args.subgroup));
    m = orbital_configuration(coset_permutation_action(*grp, sub));
    report = header_json(run);
    report["group_order"] = grp->order();
    report["subgroup_order"] = sub.size();
    report["degree"] = m.order();
  }
  BasedAlgebra a = algebra_from_relations(m);
  report["command_name"] = "orbitals";
  report["rank"] = m.rank();
  report["fibers"] = a.identity_support().size();
  if (!args.words.empty()) {
    Json words = Json::array();
    for (const auto& w : detail::split(args.words, ';')) {
      std::string word = detail::trim(w);
      int e = grp->word(word);
      int color = relation_of_element(*grp, sub, m, e);
      words.push_back({{"word", word},
                       {"element", grp->name(e)},
                       {"relation", color},
                       {"valency", valency(a, color).get_str()}});
    }
    report["words"] = words;
  }
  write_output(args.out, format_relation_matrix(m));
  if (!args.report.empty())
    write_output(args.report, dump_report(report));
  return exit_ok;
}

// eigen ------------------------------------------------------------------------

struct EigenArgs
{
  Input input;
  std::string elements;
  std::string partition;
  int jobs = 1;
  std::string out;
};

int run_eigen(const EigenArgs& args, const std::vector<std::string>& argv)
{
  auto loaded = load(args.input, argv);
  BasedAlgebra a = *loaded.algebra;
  Json report = header_json(loaded.run);
  report["command_name"] = "eigen";
  if (!args.partition.empty()) {
    Partition p = parse_partition(args.partition, a.rank());
    a = fused_algebra(a, p);
    report["partition"] = partition_json(p);
  }
  std::vector<IndexSet> sets;
  if (args.elements.empty()) {
    for (int i = 0; i < a.rank(); ++i)
      sets.push_back({i});
  } else {
    sets = detail::parse_blocks(args.elements);
    for (const auto& s : sets)
      for (int i : s)
        a.check_index(i);
  }
  std::vector<ElementSpectrum> spectra(sets.size());
  parallel_for(sets.size(), args.jobs,
               [&](std::size_t t) { spectra[t] = analyse_element(a, indicator(a, sets[t])); });
  Json elems = Json::array();
  for (std::size_t t = 0; t < sets.size(); ++t) {
    Json e = spectrum_json(spectra[t]);
    e["element"] = sets[t];
    elems.push_back(std::move(e));
  }
  report["rank"] = a.rank();
  report["elements"] = elems;
  write_output(args.out, dump_report(report));
  return exit_ok;
}

// validate ---------------------------------------------------------------------

struct ValidateArgs
{
  Input input;
  std::string out;
};

int run_validate(const ValidateArgs& args, const std::vector<std::string>& argv)
{
  if (args.input.scheme.empty() == args.input.tensor.empty())
    throw InputError("exactly one of --scheme or --tensor is required");
  RunInfo run = base_run(argv);
  run.has_input = true;
  run.input_path = args.input.scheme.empty() ? args.input.tensor : args.input.scheme;
  run.input_content = read_file(run.input_path);
  Json report = header_json(run);
  report["command_name"] = "validate";
  bool valid = true;
  try {
    std::optional<BasedAlgebra> a;
    if (!args.input.scheme.empty()) {
      auto m = parse_relation_matrix(run.input_content);
      report["kind"] = "relation-matrix";
      report["order"] = m.order();
      a = algebra_from_relations(m);
      report["coherent"] = true;
    } else {
      report["kind"] = "tensor";
      a = parse_tensor(run.input_content, false);
    }
    report["rank"] = a->rank();
    report["identity"] = a->identity_support();
    report["star"] = a->has_star() ? Json(*a->star()) : Json(nullptr);
    try {
      build_algebra(std::vector<StructureConstant>(a->entries().begin(), a->entries().end()),
                    a->identity_support(), a->star(), true, a->rank());
      report["associative"] = true;
    } catch (const AlgebraError& e) {
      report["associative"] = false;
      report["error"] = e.what();
      valid = false;
    }
  } catch (const CoherenceError& e) {
    report["coherent"] = false;
    report["error"] = e.what();
    valid = false;
  } catch (const AlgebraError& e) {
    report["error"] = e.what();
    valid = false;
  }
  report["valid"] = valid;
  write_output(args.out, dump_report(report));
  return valid ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv, argv + argc);
  if (!args.empty())
    args[0] = "isofuse";

  CLI::App app{"Exact isolating fusions of based algebras and association schemes"};
  app.set_version_flag("--version", std::string(ISOFUSE_VERSION));
  app.require_subcommand(1);

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "minimal isolating (semi)fusion of a seed family");
  add_input_options(fuse_cmd, fuse.input);
  fuse_cmd->add_option("--seed", fuse.seed, "seed family, e.g. \"1,2;3\" (0-based)")->required();
  fuse_cmd->add_option("--mode", fuse.mode, "fusion or semifusion")
    ->check(CLI::IsMember({"fusion", "semifusion"}));
  fuse_cmd->add_flag("--relaxed", fuse.relaxed, "continue when a seed is split");
  fuse_cmd->add_option("--out", fuse.out, "JSON report path (default stdout)");
  fuse_cmd->add_option("--fused-matrix", fuse.fused_matrix, "write the fused relation matrix");
  fuse_cmd->add_option("--fused-tensor", fuse.fused_tensor, "write the fused tensor");

  LatticeArgs lattice;
  auto* lattice_cmd = app.add_subcommand("lattice", "enumerate seed fusions and their lattice");
  add_input_options(lattice_cmd, lattice.input);
  lattice_cmd->add_option("--max-seed-size", lattice.max_seed_size, "largest single seed set");
  lattice_cmd->add_option("--multi", lattice.multi, "largest number of combined seed sets");
  lattice_cmd->add_flag("--combine-any", lattice.combine_any,
                        "combine arbitrary subsets, not only successful seeds");
  lattice_cmd->add_flag("--automorphisms", lattice.automorphisms,
                        "include the algebraic automorphism group");
  lattice_cmd->add_option("--jobs", lattice.jobs, "worker threads");
  lattice_cmd->add_option("--out", lattice.out, "JSON report path (default stdout)");
  lattice_cmd->add_option("--dot", lattice.dot, "DOT lattice path");

  SearchArgs search;
  auto* search_cmd = app.add_subcommand("search", "random seed search for fusions");
  add_input_options(search_cmd, search.input);
  search_cmd->add_option("--samples", search.samples, "number of random seed families");
  search_cmd->add_option("--size-range", search.size_range, "seed set sizes lo,hi");
  search_cmd->add_option("--family-size", search.family_size, "seed sets per family");
  search_cmd->add_option("--rng-seed", search.rng_seed, "mt19937_64 seed")->required();
  search_cmd->add_option("--plant", search.planted, "extra seed family evaluated first");
  search_cmd->add_option("--jobs", search.jobs, "worker threads");
  search_cmd->add_option("--out", search.out, "JSON report path (default stdout)");

  OrbitalArgs orbitals;
  auto* orbitals_cmd = app.add_subcommand("orbitals", "orbital configuration of a group action");
  orbitals_cmd->add_option("--group", orbitals.group, "group file (degree/gen lines)");
  orbitals_cmd->add_option("--semidirect", orbitals.semidirect, "m,k,M00,M01,M10,M11");
  orbitals_cmd->add_option("--subgroup", orbitals.subgroup,
                           "generators of H as a,b,c;a,b,c (coset action on G/H)");
  orbitals_cmd->add_option("--words", orbitals.words,
                           "words in x,y,z whose relations are reported, e.g. \"z2x2;z2x\"");
  orbitals_cmd->add_option("--out", orbitals.out, "relation-matrix path (default stdout)");
  orbitals_cmd->add_option("--report", orbitals.report, "JSON summary path");

  EigenArgs eigen;
  auto* eigen_cmd = app.add_subcommand("eigen", "minimal polynomials and cyclotomicity");
  add_input_options(eigen_cmd, eigen.input);
  eigen_cmd->add_option("--element", eigen.elements,
                        "index sets whose sums are analysed, e.g. \"1,4;2\" (default: basis)");
  eigen_cmd->add_option("--partition", eigen.partition, "analyse inside this fusion first");
  eigen_cmd->add_option("--jobs", eigen.jobs, "worker threads");
  eigen_cmd->add_option("--out", eigen.out, "JSON report path (default stdout)");

  ValidateArgs validate;
  auto* validate_cmd = app.add_subcommand("validate", "coherence and associativity report");
  add_input_options(validate_cmd, validate.input);
  validate_cmd->add_option("--out", validate.out, "JSON report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*fuse_cmd)
      return run_fuse(fuse, args);
    if (*lattice_cmd)
      return run_lattice(lattice, args);
    if (*search_cmd)
      return run_search(search, args);
    if (*orbitals_cmd)
      return run_orbitals(orbitals, args);
    if (*eigen_cmd)
      return run_eigen(eigen, args);
    if (*validate_cmd)
      return run_validate(validate, args);
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::domain_error*>(&e)) {
      std::cerr << "isofuse: " << e.what() << '\n';
      return exit_input;
    }
    std::cerr << "isofuse: internal error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "isofuse: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
