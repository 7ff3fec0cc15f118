// Command-line front end: file ingestion, exact chain-complex checks,
// homology and lower-bound reports. Exit codes: 0 all checks pass,
// 1 a mathematical check failed, 2 unreadable or malformed input.

#include "CLI11.hpp"

#include "novalg/equipoly.hpp"
#include "novalg/jsonio.hpp"
#include "novalg/reports.hpp"
#include "novalg/strata.hpp"

#include <charconv>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace novalg;

namespace {

struct Options {
  long precision = kDefaultPrecision;
  std::string format = "text";
  unsigned long seed = 0;  // reserved; every current subcommand is exact
};

ReportFormat fmt(const Options& opt) {
  return opt.format == "json" ? ReportFormat::Json : ReportFormat::Text;
}

long strict_long(const std::string& text) {
  long value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw std::invalid_argument("'" + text + "' is not an integer");
  return value;
}

// "1,0:0,1" -> {{1,0},{0,1}}: coordinates split by ':', factors by ','.
std::vector<std::vector<long>> parse_weights(const std::string& text) {
  std::vector<std::vector<long>> out;
  std::stringstream coords(text);
  std::string coord;
  while (std::getline(coords, coord, ':')) {
    std::vector<long> tuple;
    std::stringstream factors(coord);
    std::string tok;
    while (std::getline(factors, tok, ',')) tuple.push_back(strict_long(tok));
    out.push_back(std::move(tuple));
  }
  return out;
}

void append(std::vector<CheckStage>& stages, const std::string& name,
            const ValidationReport& rep) {
  stages.push_back({name, rep.ok, rep.violations});
}

bool all_ok(const std::vector<CheckStage>& stages) {
  for (const CheckStage& s : stages)
    if (!s.ok) return false;
  return true;
}

// Two-sided inverse round-trip below the precision window.
bool inverse_round_trip(const MatrixFamily& f, const GradedLambdaComplex& cx,
                        long precision) {
  MatrixFamily inv = invert_unitriangular(f, cx, precision);
  for (const auto& [i, names] : cx.gens) {
    long n = (long)names.size();
    if (n == 0) continue;
    auto fi = f.find(i);
    auto vi = inv.find(i);
    if (fi == f.end() || vi == inv.end()) return false;
    LambdaMatrix id = LambdaMatrix::identity(n);
    if (!equal_below(mul(fi->second, vi->second), id, precision)) return false;
    if (!equal_below(mul(vi->second, fi->second), id, precision)) return false;
  }
  return true;
}

int run_check(const std::string& path, const Options& opt,
              std::optional<long> two_n) {
  std::string text = read_file(path);
  std::vector<CheckStage> stages;
  switch (classify_input(text)) {
    case InputKind::FlowCategory: {
      FlowCategoryData fc = parse_flow_category(text);
      if (two_n) fc.two_n = *two_n;
      ValidationReport v = validate(fc);
      append(stages, "validate", v);
      if (v.ok)
        append(stages, "d^2 = 0",
               check_d_squared(build_complex(fc), opt.precision));
      break;
    }
    case InputKind::Bimodule: {
      BimoduleCounts bm = parse_bimodule(text);
      ValidationReport v = validate(bm);
      append(stages, "validate", v);
      if (v.ok) {
        GradedLambdaComplex src = build_complex(bm.source);
        GradedLambdaComplex tgt = build_complex(bm.target);
        append(stages, "source d^2 = 0", check_d_squared(src, opt.precision));
        append(stages, "target d^2 = 0", check_d_squared(tgt, opt.precision));
        append(stages, "chain map",
               check_chain_map(chain_map(bm), src, tgt, opt.precision));
      }
      break;
    }
    case InputKind::ChainMapWitness: {
      ChainMapWitness w = parse_chain_map_witness(text);
      if (two_n) w.category.two_n = *two_n;
      ValidationReport v = validate(w.category);
      append(stages, "validate", v);
      if (v.ok) {
        GradedLambdaComplex cx = build_complex(w.category);
        append(stages, "d^2 = 0", check_d_squared(cx, opt.precision));
        append(stages, "chain map",
               check_chain_map(w.pearl, cx, cx, opt.precision));
        bool uni = check_unitriangular(w.pearl, cx);
        stages.push_back({"unitriangular", uni, {}});
        if (uni)
          stages.push_back({"inverse round-trip",
                            inverse_round_trip(w.pearl, cx, opt.precision),
                            {}});
      }
      break;
    }
    case InputKind::HomotopyWitness: {
      HomotopyWitness w = parse_homotopy_witness(text);
      ValidationReport vm = validate(w.morse);
      ValidationReport vf = validate(w.floer);
      append(stages, "validate morse", vm);
      append(stages, "validate floer", vf);
      if (vm.ok && vf.ok) {
        GradedLambdaComplex morse = build_complex(w.morse);
        GradedLambdaComplex floer = build_complex(w.floer);
        append(stages, "morse d^2 = 0",
               check_d_squared(morse, opt.precision));
        append(stages, "floer d^2 = 0",
               check_d_squared(floer, opt.precision));
        append(stages, "pss chain map",
               check_chain_map(w.pss, morse, floer, opt.precision));
        append(stages, "ssp chain map",
               check_chain_map(w.ssp, floer, morse, opt.precision));
        append(stages, "pearl chain map",
               check_chain_map(w.pearl, morse, morse, opt.precision));
        stages.push_back(
            {"pearl unitriangular", check_unitriangular(w.pearl, morse), {}});
        append(stages, "homotopy identity",
               check_homotopy(w.pearl, w.ssp, w.pss, w.hmtp, morse, floer,
                              opt.precision));
      }
      break;
    }
    default:
      throw ParseError("'" + path + "' is not a checkable document");
  }
  std::cout << render_stages("check", stages, fmt(opt));
  return all_ok(stages) ? 0 : 1;
}

int run_homology(const std::string& path, const Options& opt,
                 std::optional<long> two_n) {
  FlowCategoryData fc = parse_flow_category(read_file(path));
  if (two_n) fc.two_n = *two_n;
  ValidationReport v = validate(fc);
  if (!v.ok) {
    std::cout << render_stages("homology", {{"validate", false, v.violations}},
                               fmt(opt));
    return 1;
  }
  GradedLambdaComplex cx = build_complex(fc);
  ValidationReport d2 = check_d_squared(cx, opt.precision);
  if (!d2.ok) {
    std::cout << render_stages("homology", {{"d^2 = 0", false, d2.violations}},
                               fmt(opt));
    return 1;
  }
  std::cout << render_homology(homology(cx, opt.precision), opt.precision,
                               fmt(opt));
  return 0;
}

int run_arnold(const std::string& path, const Options& opt) {
  BoundInput in = parse_bound_input(read_file(path));
  auto classes = collapse(in.homology, in.minimal_chern);
  long bound = arnold_bound(in.homology, in.minimal_chern);
  std::cout << render_bound(classes, in.minimal_chern, bound, fmt(opt));
  return 0;
}

int run_verify(const std::string& cf_path, const std::string& ref_path,
               const Options& opt, std::optional<long> two_n) {
  FlowCategoryData fc = parse_flow_category(read_file(cf_path));
  if (two_n) fc.two_n = *two_n;
  BoundInput ref = parse_bound_input(read_file(ref_path));
  ValidationReport v = validate(fc);
  if (!v.ok) {
    std::cout << render_stages("verify", {{"validate", false, v.violations}},
                               fmt(opt));
    return 1;
  }
  GradedLambdaComplex cx = build_complex(fc);
  try {
    BoundChainReport rep = verify_bound_chain(cx, ref.homology,
                                              ref.minimal_chern,
                                              opt.precision);
    std::cout << render_bound_chain(rep, fmt(opt));
    return 0;
  } catch (const ChainBroken& broken) {
    std::cout << render_bound_chain(broken.report, fmt(opt));
    return 1;
  }
}

int run_equipoly_dim(const std::vector<long>& orders,
                     const std::string& v_weights,
                     const std::string& w_weights, long degree,
                     const Options& opt) {
  AbelianRep V{orders, parse_weights(v_weights)};
  AbelianRep W{orders, parse_weights(w_weights)};
  long dim = dim_poly(V, W, degree);
  std::cout << render_poly_dim(orders, degree, dim, fmt(opt));
  return 0;
}

int run_strata_words(long interior, const Options& opt) {
  HomogeneousPoset p = enumerate_word_poset(interior);
  std::cout << render_word_count(interior, (long)p.size(), fmt(opt));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact chain-complex toolkit over the integer Novikov ring"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--precision", opt.precision,
                 "series comparison window T^K (default 32)")
      ->check(CLI::PositiveNumber);
  app.add_option("--format", opt.format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", opt.seed,
                 "reserved for randomized checks; current reports are exact");

  std::string path, ref_path;
  long two_n_value = 0;
  bool has_two_n = false;

  CLI::App* check = app.add_subcommand(
      "check", "validate a document and all identities it asserts");
  check->add_option("path", path, "JSON document")->required();
  CLI::Option* check_two_n =
      check->add_option("--two-n", two_n_value, "override the grading period");

  CLI::App* homology_cmd = app.add_subcommand(
      "homology", "per-class module structure of a flow category's complex");
  homology_cmd->add_option("path", path, "flow category JSON")->required();
  CLI::Option* homology_two_n = homology_cmd->add_option(
      "--two-n", two_n_value, "override the grading period");

  CLI::App* arnold_cmd = app.add_subcommand(
      "arnold", "lower bound from a graded homology table");
  arnold_cmd->add_option("path", path, "homology data JSON")->required();

  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "check the bound inequality chain of a complex against "
                "reference homology");
  verify_cmd->add_option("complex", path, "flow category JSON")->required();
  verify_cmd->add_option("reference", ref_path, "homology data JSON")
      ->required();
  CLI::Option* verify_two_n = verify_cmd->add_option(
      "--two-n", two_n_value, "override the grading period");

  CLI::App* equipoly_cmd =
      app.add_subcommand("equipoly", "equivariant polynomial spaces");
  equipoly_cmd->require_subcommand(1);
  CLI::App* dim_cmd = equipoly_cmd->add_subcommand(
      "dim", "dimension of the equivariant polynomial space");
  std::vector<long> orders;
  std::string v_weights, w_weights;
  long degree = 0;
  dim_cmd->add_option("--group", orders, "cyclic factor orders, e.g. 2,4")
      ->required()
      ->delimiter(',');
  dim_cmd
      ->add_option("--v-weights", v_weights,
                   "source weight tuples, coordinates split by ':', e.g. "
                   "1,0:0,1")
      ->required();
  dim_cmd->add_option("--w-weights", w_weights, "target weight tuples")
      ->required();
  dim_cmd->add_option("--degree", degree, "total degree cap")->required();

  CLI::App* strata_cmd =
      app.add_subcommand("strata", "stratified combinatorics");
  strata_cmd->require_subcommand(1);
  CLI::App* words_cmd = strata_cmd->add_subcommand(
      "words", "count boundary words of a broken chain");
  long interior = 0;
  words_cmd->add_option("--interior", interior, "number of interior levels")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::optional<long> two_n;
    if (check->parsed() && *check_two_n) two_n = two_n_value;
    if (homology_cmd->parsed() && *homology_two_n) two_n = two_n_value;
    if (verify_cmd->parsed() && *verify_two_n) two_n = two_n_value;
    (void)has_two_n;

    if (check->parsed()) return run_check(path, opt, two_n);
    if (homology_cmd->parsed()) return run_homology(path, opt, two_n);
    if (arnold_cmd->parsed()) return run_arnold(path, opt);
    if (verify_cmd->parsed()) return run_verify(path, ref_path, opt, two_n);
    if (equipoly_cmd->parsed() && dim_cmd->parsed())
      return run_equipoly_dim(orders, v_weights, w_weights, degree, opt);
    if (strata_cmd->parsed() && words_cmd->parsed())
      return run_strata_words(interior, opt);
    std::cerr << "error: no subcommand selected\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
