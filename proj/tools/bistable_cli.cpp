// Command-line workbench driver. One subcommand per engine:
//
//   eval          run an SPCF program (small-step, fuel bounded)
//   denote        denote a term in the cutoff model (element or table)
//   check-biorder validate a biorder given as JSON
//   hom           enumerate the monotone bistable functions between types
//   define        synthesize a closed term denoting a carrier element
//   retract       print the first-order retraction pair for a type
//   cps           translate SPCF into the omega calculus (--diff runs both)
//   game          strategy biorder of a game given as JSON
//   sequentialize strategy computing a function table between strategy biorders
//   verify        run a named verification suite
//
// Exit codes: 0 success/pass, 1 verification failure, 2 usage or input error.
// Term and type arguments are taken inline when they parse as such
// syntactically (leading '(' or '{', or a known atom); otherwise they are
// read as file paths.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "bistable/corpus.hpp"
#include "bistable/cps.hpp"
#include "bistable/json_io.hpp"
#include "bistable/lambda.hpp"
#include "bistable/spcf.hpp"
#include "bistable/verify.hpp"

using namespace bistable;

namespace {

bool looks_inline(const std::string& s) {
  if (s.empty()) return true;
  char c = s[0];
  if (c == '(' || c == '{' || c == '[') return true;
  if (s == "top" || s == "bot" || s == "S" || s == "nat" || s == "N") return true;
  for (char d : s)
    if (d < '0' || d > '9') return false;
  return true;  // bare numerals
}

std::string slurp(const std::string& arg) {
  if (looks_inline(arg)) return arg;
  std::ifstream in(arg);
  if (!in) fail("input-error", "cannot open file '" + arg + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail("bad-json", e.what());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"bistable biorder and sequential algorithm workbench"};
  app.require_subcommand(1);
  app.fallthrough(true);

  std::size_t cutoff = 8;
  std::size_t fuel = 100000;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = kDefaultSeed;
  std::string format = "text";
  bool trace = false;
  app.add_option("--cutoff", cutoff, "numeral cutoff k for the denotational model")
      ->check(CLI::PositiveNumber);
  app.add_option("--fuel", fuel, "step bound for evaluation");
  app.add_option("--budget", budget, "candidate-table budget for enumerations");
  app.add_option("--seed", seed, "seed for randomized suites");
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--trace", trace, "print one line per evaluation step");

  std::string term_arg, type_arg, second_arg, elem_arg, suite_arg;
  bool diff = false;
  std::size_t seq_n = 4;

  auto* c_eval = app.add_subcommand("eval", "evaluate an SPCF program");
  c_eval->fallthrough();
  c_eval->add_option("term", term_arg)->required();

  auto* c_denote = app.add_subcommand("denote", "denote a term in the cutoff model");
  c_denote->fallthrough();
  c_denote->add_option("term", term_arg)->required();

  auto* c_check = app.add_subcommand("check-biorder", "validate a biorder (JSON)");
  c_check->fallthrough();
  c_check->add_option("biorder", term_arg)->required();

  auto* c_hom = app.add_subcommand("hom", "enumerate monotone bistable functions");
  c_hom->fallthrough();
  c_hom->add_option("dom", type_arg)->required();
  c_hom->add_option("cod", second_arg)->required();

  auto* c_define = app.add_subcommand("define", "synthesize a term denoting an element");
  c_define->fallthrough();
  c_define->add_option("type", type_arg)->required();
  c_define->add_option("element", elem_arg, "carrier index (or JSON {\"index\": i})")
      ->required();

  auto* c_retract = app.add_subcommand("retract", "first-order retraction pair for a type");
  c_retract->fallthrough();
  c_retract->add_option("type", type_arg)->required();

  auto* c_cps = app.add_subcommand("cps", "translate SPCF into the omega calculus");
  c_cps->fallthrough();
  c_cps->add_option("term", term_arg)->required();
  c_cps->add_flag("--diff", diff, "also run both evaluators and compare outcomes");

  auto* c_game = app.add_subcommand("game", "strategy biorder of a game (JSON)");
  c_game->fallthrough();
  c_game->add_option("game", term_arg)->required();

  auto* c_seq = app.add_subcommand("sequentialize",
                                   "strategy for a function table between strategy biorders");
  c_seq->fallthrough();
  c_seq->add_option("input", term_arg,
                    "JSON {\"game_a\":…, \"game_b\":…, \"table\":[…]}")
      ->required();

  auto* c_verify = app.add_subcommand("verify", "run a named verification suite");
  c_verify->fallthrough();
  c_verify->add_option("suite", suite_arg,
                       "one of: biorder-axioms hom-counts seq-lemma ccc-laws universality "
                       "retractions adequacy catch-case cps-diff omega-roundtrip "
                       "games-structure realization full-embedding stability all")
      ->required();
  c_verify->add_option("--n", seq_n, "arity bound for seq-lemma");

  CLI11_PARSE(app, argc, argv);

  if (c_eval->parsed()) {
    EvalResult r = eval(parse_term(slurp(term_arg)), fuel, trace);
    if (trace)
      for (const auto& l : r.trace) std::cout << l.rule << " ; " << l.term << "\n";
    if (format == "json") {
      Json j;
      j["outcome"] = show_outcome(r.outcome);
      j["steps"] = r.steps;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "outcome: " << show_outcome(r.outcome) << " (" << r.steps << " steps)\n";
    }
    return 0;
  }

  if (c_denote->parsed()) {
    DenoteCtx ctx(cutoff, budget);
    TermPtr t = parse_term(slurp(term_arg));
    Typed typed = elaborate({}, t);
    if (typed.type->kind == Type::Kind::Arrow) {
      BiFunction f = denote_bifun(ctx, t);
      if (format == "json") {
        std::cout << bifunction_to_json(f).dump() << "\n";
      } else {
        std::cout << "type: " << show_type(typed.type) << "\n";
        for (std::size_t i = 0; i < f.dom->size(); ++i)
          std::cout << f.dom->elements[i] << " -> " << f.cod->elements[f(i)] << "\n";
      }
      return 0;
    }
    DenotedValue v = denote_element(ctx, t);
    if (format == "json") {
      Json j;
      j["type"] = show_type(v.type);
      j["index"] = v.element.index;
      j["label"] = v.element.label();
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "type: " << show_type(v.type) << "\nelement: " << v.element.label()
                << " (index " << v.element.index << ")\n";
    }
    return 0;
  }

  if (c_check->parsed()) {
    BiorderPtr b = biorder_from_json(parse_json(slurp(term_arg)), /*check_axioms=*/false);
    auto diags = validate(*b);
    if (format == "json") {
      Json j = Json::array();
      for (const auto& d : diags) j.push_back({{"code", d.code}, {"message", d.message}});
      std::cout << j.dump() << "\n";
    } else {
      for (const auto& d : diags) std::cout << d.code << ": " << d.message << "\n";
      std::cout << (diags.empty() ? "valid" : "invalid") << "\n";
    }
    return diags.empty() ? 0 : 1;
  }

  if (c_hom->parsed()) {
    DenoteCtx ctx(cutoff, budget);
    const auto& da = ctx.den(parse_type(slurp(type_arg)));
    const auto& db = ctx.den(parse_type(slurp(second_arg)));
    auto fs = hom_set(da.bi, db.bi, budget);
    if (format == "json") {
      Json j = Json::array();
      for (const auto& f : fs) j.push_back(f.table);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << fs.size() << " functions\n";
      for (const auto& f : fs) std::cout << function_label(f) << "\n";
    }
    return 0;
  }

  if (c_define->parsed()) {
    DenoteCtx ctx(cutoff, budget);
    TypePtr t = parse_type(slurp(type_arg));
    const auto& d = ctx.den(t);
    std::string etext = slurp(elem_arg);
    std::size_t index = 0;
    if (!etext.empty() && etext[0] == '{') {
      Json j = parse_json(etext);
      if (!j.contains("index")) fail("bad-json", "element JSON needs an index field");
      index = j.at("index").get<std::size_t>();
    } else {
      index = std::stoul(etext);
    }
    if (index >= d.bi->size()) fail("input-error", "element index out of range");
    TermPtr m = define_element(ctx, Element{d.bi, index}, t);
    std::cout << show_term(m) << "\n";
    return 0;
  }

  if (c_retract->parsed()) {
    RetractionPair r = retraction_terms(parse_type(slurp(type_arg)));
    if (format == "json") {
      Json j;
      j["type"] = show_type(r.type);
      j["target"] = show_type(r.target);
      j["n"] = r.n;
      j["m"] = r.m;
      j["inj"] = show_term(r.inj);
      j["proj"] = show_term(r.proj);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "target: " << show_type(r.target) << "  (n=" << r.n << ", m=" << r.m
                << ")\ninj:  " << show_term(r.inj) << "\nproj: " << show_term(r.proj) << "\n";
    }
    return 0;
  }

  if (c_cps->parsed()) {
    TermPtr t = parse_term(slurp(term_arg));
    OTermPtr image = cps_closed(t);
    std::cout << show_oterm(image) << "\n";
    if (diff) {
      EvalResult direct = eval(t, fuel);
      OOutcome o = eval_prog(image, 2 * fuel);
      std::cout << "direct: " << show_outcome(direct.outcome)
                << "\ncps:    " << show_ooutcome(o) << "\n";
      return show_outcome(direct.outcome) == show_ooutcome(o) ? 0 : 1;
    }
    return 0;
  }

  if (c_game->parsed()) {
    GamePtr g = game_from_json(parse_json(slurp(term_arg)));
    auto diags = validate_game(*g);
    if (!diags.empty()) fail("input-error", diags[0].code + ": " + diags[0].message);
    StratBiorder sb = strat_biorder(g, budget);
    if (format == "json") {
      Json j;
      j["biorder"] = biorder_to_json(*sb.biorder);
      Json strategies = Json::array();
      for (const auto& s : sb.strategies) {
        Json plays = Json::array();
        for (const auto& p : s.plays) {
          if (p.empty()) continue;
          Json pj = Json::array();
          for (std::size_t m : p) pj.push_back(g->move_ids[m]);
          plays.push_back(std::move(pj));
        }
        strategies.push_back(std::move(plays));
      }
      j["strategies"] = std::move(strategies);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << sb.strategies.size() << " strategies\n";
      for (std::size_t i = 0; i < sb.strategies.size(); ++i)
        std::cout << i << ": " << sb.biorder->elements[i] << "\n";
    }
    return 0;
  }

  if (c_seq->parsed()) {
    Json j = parse_json(slurp(term_arg));
    if (!j.contains("game_a") || !j.contains("game_b") || !j.contains("table"))
      fail("bad-json", "sequentialize needs game_a, game_b and table");
    GamePtr a = game_from_json(j.at("game_a"));
    GamePtr b = game_from_json(j.at("game_b"));
    ArrowGame ab = arrow(a, b, budget);
    StratBiorder sa = strat_biorder(a, budget);
    StratBiorder sb = strat_biorder(b, budget);
    BiFunction f{sa.biorder, sb.biorder, j.at("table").get<std::vector<std::size_t>>()};
    if (f.table.size() != sa.biorder->size()) fail("bad-json", "table size mismatch");
    Strategy s = sequentialize(f, ab, sa, sb);
    std::cout << strategy_to_json(s).dump() << "\n";
    return 0;
  }

  if (c_verify->parsed()) {
    std::vector<SuiteReport> reports;
    if (suite_arg == "all") {
      reports = verify_all(seed);
    } else if (suite_arg == "biorder-axioms") reports.push_back(verify_biorder_axioms());
    else if (suite_arg == "hom-counts") reports.push_back(verify_hom_counts());
    else if (suite_arg == "seq-lemma") reports.push_back(verify_seq_lemma(seq_n));
    else if (suite_arg == "ccc-laws") reports.push_back(verify_ccc_laws(seed));
    else if (suite_arg == "universality") reports.push_back(verify_universality());
    else if (suite_arg == "retractions") reports.push_back(verify_retractions());
    else if (suite_arg == "adequacy") reports.push_back(verify_adequacy(cutoff, fuel));
    else if (suite_arg == "catch-case") reports.push_back(verify_catch_case());
    else if (suite_arg == "cps-diff") reports.push_back(verify_cps_diff(fuel));
    else if (suite_arg == "omega-roundtrip") reports.push_back(verify_omega_roundtrip());
    else if (suite_arg == "games-structure") reports.push_back(verify_games_structure());
    else if (suite_arg == "realization") reports.push_back(verify_realization());
    else if (suite_arg == "full-embedding") reports.push_back(verify_full_embedding());
    else if (suite_arg == "stability") reports.push_back(verify_stability());
    else fail("usage-error", "unknown suite '" + suite_arg + "'");
    bool all_pass = true;
    for (const auto& r : reports) {
      for (const auto& l : r.lines) {
        std::cout << (l.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << l.label;
        if (!l.detail.empty()) std::cout << " (" << l.detail << ")";
        std::cout << "\n";
      }
      all_pass = all_pass && r.passed();
    }
    std::cout << (all_pass ? "pass" : "fail") << "\n";
    return all_pass ? 0 : 1;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (e.code() == "usage-error" || e.code() == "input-error" || e.code() == "bad-json" ||
        e.code() == "parse-error" || e.code() == "type-error")
      return 2;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
