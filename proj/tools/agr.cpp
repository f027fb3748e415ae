// agr: command-line front end for the library.
//
// Exit codes: 0 success, 2 usage error, 3 domain error, 4 work bound exceeded.

#include "agr/agr.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string f;
  std::string h;
  std::optional<int> k;
  std::string mode = "continuous";
  bool use_derivative = false;
  std::string family;
  std::optional<agr::u64> p;
  std::optional<agr::u64> q;
  std::optional<agr::u64> g;
  std::optional<agr::u64> g1;
  agr::u64 n = 5;
  std::optional<agr::u64> y;
  std::string primes;
  agr::u64 trials = 8;
  agr::u64 seed = 0;
  std::string out;
  std::string format = "json";
  std::string demo;
  bool inverse = false;
  std::vector<std::string> exprs;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<agr::u64> parse_primes(const std::string& s) {
  std::vector<agr::u64> out;
  if (s.empty()) throw UsageError("--primes is required");
  if (auto colon = s.find(':'); colon != std::string::npos) {
    const agr::u64 a = std::stoull(s.substr(0, colon));
    const agr::u64 b = std::stoull(s.substr(colon + 1));
    for (agr::u64 v = std::max<agr::u64>(a, 3); v <= b; ++v)
      if (agr::is_prime(v)) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoull(tok));
  return out;
}

std::vector<agr::Family> parse_families(const std::string& s) {
  std::vector<agr::Family> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) {
      try {
        out.push_back(agr::parse_family(tok));
      } catch (const agr::DomainError& e) {
        throw UsageError(e.what());
      }
    }
  if (out.empty()) throw UsageError("--family is required");
  return out;
}

agr::u64 require(const std::optional<agr::u64>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(o.out, std::ios::binary);
  if (!os) throw agr::DomainError("cannot open " + o.out + " for writing");
  os << text;
}

void emit(const Options& o, const agr::Json& j) { emit(o, j.dump(2) + "\n"); }

agr::FieldParams field_for(const Options& o) { return agr::make_field(require(o.p, "--p"), o.g, o.g1); }

int run_command(const std::string& cmd, const Options& o) {
  using namespace agr;
  const Mode mode = parse_mode(o.mode);
  if (cmd == "parse") {
    const Expr e = parse(o.f);
    if (o.format == "text") emit(o, render(e) + "\n");
    else emit(o, Json{{"input", o.f}, {"expr", render(e)}});
  } else if (cmd == "diff") {
    const Expr e = parse(o.f);
    const Expr d = o.inverse ? inverse_rate(e) : differentiate(e);
    if (o.format == "text") emit(o, render(d) + "\n");
    else emit(o, Json{{"expr", render(e)}, {o.inverse ? "inverse_rate" : "derivative", render(d)}});
  } else if (cmd == "grain") {
    if (!o.k) throw UsageError("--k is required");
    emit(o, to_json(grain(parse(o.f), *o.k, mode, o.use_derivative)));
  } else if (cmd == "compare") {
    emit(o, to_json(agr_compare(parse(o.f), parse(o.h), mode, o.k, o.use_derivative)));
  } else if (cmd == "rank") {
    if (o.exprs.empty()) throw UsageError("rank needs at least one expression");
    std::vector<Expr> fs;
    for (const auto& s : o.exprs) fs.push_back(parse(s));
    Json classes = Json::array();
    for (const auto& cls : rank_difficulty(fs, mode, o.k, o.use_derivative)) {
      Json c = Json::array();
      for (const auto& e : cls) c.push_back(render(e));
      classes.push_back(c);
    }
    emit(o, Json{{"mode", to_string(mode)}, {"classes", classes}});
  } else if (cmd == "solve") {
    const Family fam = parse_families(o.family).front();
    ProblemInstance inst{fam, field_for(o), o.n, require(o.y, "--y"), {}};
    validate(inst);
    const SolveResult r = solve_exhaustive(inst, {}, work_bound_from_env());
    Json j{{"instance", to_json(inst)}, {"solutions", to_json(r.solutions)}, {"exhaustive_ops", std::to_string(r.ops)}};
    if (fam == Family::DLP) {
      const BsgsResult b = solve_dlp_bsgs(inst.field, inst.y);
      j["bsgs"] = {{"x", std::to_string(b.x)}, {"ops", std::to_string(b.ops)}};
    }
    emit(o, j);
  } else if (cmd == "census") {
    const Family fam = parse_families(o.family).front();
    const ProblemInstance inst{fam, field_for(o), o.n, 1, {}};
    Json j = to_json(preimage_census(inst, work_bound_from_env()));
    j["family"] = to_string(fam);
    j["p"] = std::to_string(inst.field.p);
    emit(o, j);
  } else if (cmd == "reduce") {
    const u64 y = require(o.y, "--y");
    ReductionResult r;
    if (o.demo == "gx-shift") {
      const FieldParams f = make_field(require(o.p, "--p"), std::nullopt, o.g1);
      r = reduce_gx_shift(y, f, require(o.g, "--g"), exhaustive_tlp_oracle());
    } else if (o.demo == "gxxx") {
      r = solve_gxxx(field_for(o), y);
    } else if (o.demo == "gxn-dlog") {
      r = reduce_gxn_to_dlp(y, field_for(o), o.n, bsgs_dlp_oracle());
    } else if (o.demo == "dlp-spp") {
      const FieldParams f = field_for(o);
      int bits = 0;
      for (u64 v = f.p - 1; v; v >>= 1) ++bits;
      r = reduce_dlp_to_spp(y, f, bits, exhaustive_spp_oracle());
    } else if (o.demo == "crt") {
      const u64 p = require(o.p, "--p");
      const u64 q = require(o.q, "--q");
      FieldParams f;
      f.p = p;
      f.g = o.g.value_or(2);
      f.g1 = o.g1.value_or(1);
      const ProblemInstance proto{parse_families(o.family.empty() ? "DLP" : o.family).front(), f, o.n, y, {}};
      r = reduce_composite_crt(y, proto, p, q);
    } else {
      throw UsageError("--demo must be one of gx-shift, gxxx, gxn-dlog, dlp-spp, crt");
    }
    emit(o, Json{{"demo", o.demo}, {"y", std::to_string(y)}, {"result", to_json(r)}});
  } else if (cmd == "sweep") {
    SweepConfig cfg;
    cfg.families = parse_families(o.family);
    cfg.primes = parse_primes(o.primes);
    cfg.g = o.g.value_or(2);
    cfg.n = o.n;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.work_bound = work_bound_from_env();
    const ExperimentReport rep = hardness_sweep(cfg);
    if (o.format == "json") {
      Json rows = Json::array();
      for (const auto& r : rep.rows) {
        rows.push_back({{"prime", std::to_string(r.prime)},
                        {"family", to_string(r.family)},
                        {"g", std::to_string(r.g)},
                        {"n", std::to_string(r.n)},
                        {"within_bound", r.within_bound},
                        {"avg_preimage", r.avg_preimage},
                        {"max_preimage", std::to_string(r.max_preimage)},
                        {"solvable_fraction", r.solvable_fraction},
                        {"exhaustive_ops", std::to_string(r.exhaustive_ops)},
                        {"bsgs_ops", r.bsgs_ops ? Json(std::to_string(*r.bsgs_ops)) : Json(nullptr)},
                        {"intersection_exponent",
                         r.intersection_exponent ? Json(*r.intersection_exponent) : Json(nullptr)}});
      }
      emit(o, Json{{"rows", rows}});
    } else {
      emit(o, to_csv(rep));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asymptotic granularity reduction toolkit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; explicit flags take precedence");
  Options o;

  auto add_expr = [&](CLI::App* s, bool with_h) {
    s->add_option("--f", o.f, "expression")->required();
    if (with_h) s->add_option("--h", o.h, "expression compared against")->required();
  };
  auto add_mode = [&](CLI::App* s) {
    s->add_option("--mode", o.mode, "continuous or discrete")->check(CLI::IsMember({"continuous", "discrete"}));
    s->add_option("--k", o.k, "granularity (0..2)")->check(CLI::Range(0, 2));
    s->add_flag("--use-derivative", o.use_derivative, "apply the logs to f' instead of f");
  };
  auto add_field = [&](CLI::App* s) {
    s->add_option("--p", o.p, "prime modulus");
    s->add_option("--g", o.g, "generator");
    s->add_option("--g1", o.g1, "inner generator mod p-1");
    s->add_option("--n", o.n, "exponent n (>= 5)");
  };
  auto add_output = [&](CLI::App* s) {
    s->add_option("--out", o.out, "write the result here instead of stdout");
    s->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  auto* parse_cmd = app.add_subcommand("parse", "parse and render an expression");
  add_expr(parse_cmd, false);
  add_output(parse_cmd);

  auto* diff_cmd = app.add_subcommand("diff", "derivative in x");
  add_expr(diff_cmd, false);
  diff_cmd->add_flag("--inverse", o.inverse, "derivative of the inverse function, in y");
  add_output(diff_cmd);

  auto* grain_cmd = app.add_subcommand("grain", "k-fold logarithmic granularity");
  add_expr(grain_cmd, false);
  add_mode(grain_cmd);
  add_output(grain_cmd);

  auto* compare_cmd = app.add_subcommand("compare", "AGR verdict of f against h");
  compare_cmd->set_help_flag("--help", "print this help message and exit");
  add_expr(compare_cmd, true);
  add_mode(compare_cmd);
  add_output(compare_cmd);

  auto* rank_cmd = app.add_subcommand("rank", "order expressions by inversion difficulty");
  rank_cmd->add_option("exprs", o.exprs, "expressions")->required();
  add_mode(rank_cmd);
  add_output(rank_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "exhaustive solutions of y = f(x) mod p");
  solve_cmd->add_option("--family", o.family, "problem family")->required();
  add_field(solve_cmd);
  solve_cmd->add_option("--y", o.y, "target");
  add_output(solve_cmd);

  auto* census_cmd = app.add_subcommand("census", "preimage counts over the whole field");
  census_cmd->add_option("--family", o.family, "problem family")->required();
  add_field(census_cmd);
  add_output(census_cmd);

  auto* reduce_cmd = app.add_subcommand("reduce", "run a reduction with its trace");
  reduce_cmd->add_option("--demo", o.demo, "gx-shift, gxxx, gxn-dlog, dlp-spp or crt")
      ->required()
      ->check(CLI::IsMember({"gx-shift", "gxxx", "gxn-dlog", "dlp-spp", "crt"}));
  add_field(reduce_cmd);
  reduce_cmd->add_option("--q", o.q, "second prime (crt)");
  reduce_cmd->add_option("--family", o.family, "family for crt");
  reduce_cmd->add_option("--y", o.y, "target");
  add_output(reduce_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "prime sweep report");
  sweep_cmd->add_option("--family", o.family, "comma-separated families")->required();
  sweep_cmd->add_option("--primes", o.primes, "comma list or a:b range")->required();
  sweep_cmd->add_option("--g", o.g, "generator when valid for the prime");
  sweep_cmd->add_option("--n", o.n, "exponent n");
  sweep_cmd->add_option("--trials", o.trials, "solver trials per row")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed", o.seed, "random seed");
  sweep_cmd->add_option("--out", o.out, "CSV or JSON path");
  o.format = "json";
  sweep_cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));
  sweep_cmd->preparse_callback([&](std::size_t) { o.format = "csv"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run_command(cmd, o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const agr::WorkBoundExceeded& e) {
    std::cerr << "work bound exceeded: " << e.what() << "\n";
    return 4;
  } catch (const agr::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
