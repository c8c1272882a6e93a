// Command-line surface: generators, solvers, rounding, brute force, and the
// relaxation comparison, with JSON/text reports. Exit codes: 0 success,
// 1 bad input or domain error, 2 infeasible, 3 budget exceeded.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "submp/brute_force.h"
#include "submp/common.h"
#include "submp/json_io.h"
#include "submp/mincsp.h"
#include "submp/relaxation.h"
#include "submp/rounding.h"
#include "submp/submodular.h"
#include "submp/zoo.h"

namespace {

using nlohmann::json;
using namespace submp;

struct Options {
  std::string command;
  std::string kind;
  std::string input;       // instance document path (alternative to --kind)
  std::string assignment;  // fractional assignment document (round only)
  std::string out;
  std::string format = "text";
  int k = 3;
  int gamma = -1;
  int n = 8;
  int m = 10;
  std::uint64_t seed = 1;
  int max_iters = 20000;
  double tol = 1e-6;
  int threads = 1;
  bool certify = false;
};

std::string fmt_num(double v) {
  char buf[64];
  if (std::abs(v) < 1e15 && std::abs(v - std::round(v)) < 1e-9)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(v)));
  else
    std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string fmt_ratio(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// Accumulates the same report twice: op-keyed JSON fields for --format json
// and one line per producing operation for --format text.
class Report {
 public:
  explicit Report(const Options& o) : out_path_(o.out), format_(o.format) {
    doc_["schema"] = 1;
    doc_["op"] = o.command;
    doc_["seed"] = o.seed;
    json cfg;
    cfg["command"] = o.command;
    if (!o.kind.empty()) cfg["kind"] = o.kind;
    if (!o.input.empty()) cfg["input"] = o.input;
    if (!o.assignment.empty()) cfg["assignment"] = o.assignment;
    cfg["k"] = o.k;
    cfg["gamma"] = o.gamma;
    cfg["n"] = o.n;
    cfg["m"] = o.m;
    cfg["seed"] = o.seed;
    cfg["max_iters"] = o.max_iters;
    cfg["tol"] = o.tol;
    cfg["threads"] = o.threads;
    cfg["certify"] = o.certify;
    doc_["config"] = std::move(cfg);
    std::string head = o.command;
    if (!o.kind.empty()) head += " kind=" + o.kind;
    if (!o.input.empty()) head += " input=" + o.input;
    head += " seed=" + std::to_string(o.seed);
    line(head);
  }

  void field(const std::string& key, json v) { doc_[key] = std::move(v); }
  void line(std::string s) { lines_.push_back(std::move(s)); }

  void emit() const {
    std::string text;
    for (const std::string& l : lines_) text += l + "\n";
    const std::string body = format_ == "json" ? dump_json(doc_) : text;
    if (out_path_.empty())
      std::cout << body;
    else
      write_text_file(out_path_, body);
  }

 private:
  json doc_;
  std::vector<std::string> lines_;
  std::string out_path_, format_;
};

struct MultiwaySource {
  MultiwayInstance inst;
  std::optional<SymmetrySpec> sym;
};

MultiwaySource load_multiway(const Options& o) {
  if (!o.input.empty() && !o.kind.empty())
    throw DomainError("give an input file or --kind, not both");
  if (!o.input.empty()) {
    const json j = parse_json_file(o.input);
    MultiwaySource s{instance_from_json(j), std::nullopt};
    if (json_has_symmetry(j)) s.sym = symmetry_from_json(j);
    return s;
  }
  if (o.kind == "grid") {
    GapInstance g = gen_grid(o.k);
    return {std::move(g.inst), std::move(g.sym)};
  }
  if (o.kind == "symmetric-gamma" || o.kind == "symgamma") {
    GapInstance g = gen_symmetric_gamma(o.k, o.gamma);
    return {std::move(g.inst), std::move(g.sym)};
  }
  if (o.kind == "hmp-cycle") return {gen_hmp_cycle(), std::nullopt};
  if (o.kind == "graph-mc" || o.kind == "hypergraph-mc" || o.kind == "coverage")
    return {gen_random_family(o.kind, o.n, o.k, o.m, o.seed), std::nullopt};
  if (o.kind == "hk")
    throw DomainError("kind hk is a label CSP; use gen, lp, or brute");
  if (o.kind.empty()) throw DomainError("need an input file or --kind");
  throw DomainError("unknown kind: " + o.kind);
}

struct CspSource {
  MinCspInstance csp;
  std::optional<BasicLpSolution> cert;
};

CspSource load_csp(const Options& o) {
  if (!o.input.empty() && !o.kind.empty())
    throw DomainError("give an input file or --kind, not both");
  if (!o.input.empty()) return {csp_from_json(parse_json_file(o.input)), std::nullopt};
  if (o.kind == "hk") {
    HkBundle b = gen_hk(o.k);
    return {std::move(b.csp), std::move(b.certificate)};
  }
  throw DomainError("this command needs a csp document or --kind hk");
}

SolveConfig solve_config(const Options& o) {
  SolveConfig cfg;
  cfg.max_iters = o.max_iters;
  cfg.tol = o.tol;
  cfg.seed = o.seed;
  return cfg;
}

json solve_fields(const SolveReport& rep) {
  json j;
  j["value"] = rep.value;
  j["iterations"] = rep.iterations;
  j["gap_estimate"] = rep.gap_estimate;
  j["method"] = rep.method;
  return j;
}

SolveReport run_solve(const MultiwayInstance& inst, const Options& o, Report& r) {
  SolveReport rep = solve_submp_rel(inst, solve_config(o));
  r.field("solve_submp_rel", solve_fields(rep));
  r.line("solve_submp_rel value=" + fmt_num(rep.value) +
         " iterations=" + std::to_string(rep.iterations) +
         " gap_estimate=" + fmt_num(rep.gap_estimate) + " method=" + rep.method);
  return rep;
}

void cmd_gen(const Options& o) {
  if (o.kind.empty()) throw DomainError("gen needs --kind");
  json j;
  if (o.kind == "hk") {
    j = csp_to_json(gen_hk(o.k).csp);
  } else {
    const MultiwaySource s = load_multiway(o);
    j = instance_to_json(s.inst, s.sym ? &*s.sym : nullptr);
  }
  json prov;
  prov["kind"] = o.kind;
  prov["k"] = o.k;
  prov["gamma"] = o.gamma;
  prov["n"] = o.n;
  prov["m"] = o.m;
  prov["seed"] = o.seed;
  j["provenance"] = std::move(prov);
  const std::string body = dump_json(j);
  if (o.out.empty())
    std::cout << body;
  else
    write_text_file(o.out, body);
}

void cmd_solve(const Options& o) {
  const MultiwaySource s = load_multiway(o);
  Report r(o);
  const SolveReport rep = run_solve(s.inst, o, r);
  r.field("assignment", assignment_to_json(rep.assignment));
  r.emit();
}

void cmd_round(const Options& o) {
  const MultiwaySource s = load_multiway(o);
  Report r(o);
  FractionalAssignment a;
  if (!o.assignment.empty()) {
    json j = parse_json_file(o.assignment);
    if (j.is_object() && j.contains("assignment")) j = j["assignment"];  // solve report
    a = assignment_from_json(j);
    validate_assignment(s.inst, a);
  } else {
    a = run_solve(s.inst, o, r).assignment;
  }
  const double lp = lp_cost_exact(s.inst, a);
  const double expected = expected_cost_exact(s.inst, a);
  const BestRounding best = best_rounding(s.inst, a);
  const double factor = 2.0 - 2.0 / double(s.inst.k);
  r.field("lp_cost_exact", lp);
  r.field("expected_cost_exact", expected);
  json jb;
  jb["value"] = best.value;
  jb["theta"] = best.theta;
  jb["fallback_terminal"] = best.fallback_terminal;
  jb["label"] = best.partition.label;
  r.field("best_rounding", std::move(jb));
  json jg;
  jg["factor"] = factor;
  jg["bound"] = factor * lp;
  jg["satisfied"] = expected <= factor * lp + 1e-9;
  r.field("guarantee", std::move(jg));
  r.line("lp_cost_exact value=" + fmt_num(lp));
  r.line("expected_cost_exact value=" + fmt_num(expected));
  r.line("best_rounding value=" + fmt_num(best.value) + " theta=" + fmt_num(best.theta) +
         " fallback=" + std::to_string(best.fallback_terminal));
  r.line("guarantee factor=" + fmt_num(factor) + " bound=" + fmt_num(factor * lp) +
         " ok=" + (expected <= factor * lp + 1e-9 ? std::string("yes") : std::string("NO")));
  r.emit();
}

json brute_fields(const BruteForceResult& res) {
  json j;
  j["value"] = res.value;
  j["label"] = res.partition.label;
  j["states"] = res.states;
  return j;
}

void cmd_brute(const Options& o) {
  bool csp_mode = o.kind == "hk";
  if (!o.input.empty() && parse_json_file(o.input).value("type", "") == "csp") csp_mode = true;
  Report r(o);
  if (csp_mode) {
    const CspSource s = load_csp(o);
    const CspBruteResult res = brute_force_csp(s.csp);
    json j;
    j["value"] = res.value;
    j["labels"] = res.labels;
    j["states"] = res.states;
    r.field("brute_force_csp", std::move(j));
    r.line("brute_force_csp value=" + fmt_num(res.value) +
           " states=" + std::to_string(res.states));
  } else {
    const MultiwaySource s = load_multiway(o);
    try {
      const BruteForceResult res = brute_force_partition(s.inst, o.threads);
      r.field("brute_force_partition", brute_fields(res));
      r.line("brute_force_partition opt=" + fmt_num(res.value) +
             " states=" + std::to_string(res.states));
    } catch (const CapacityError& e) {
      if (!s.sym) throw;  // nothing else to report
      r.field("brute_force_partition", json{{"skipped", e.what()}});
      r.line(std::string("brute_force_partition skipped: ") + e.what());
    }
    if (s.sym) {
      const BruteForceResult sres = brute_force_symmetric(s.inst, *s.sym);
      r.field("brute_force_symmetric", brute_fields(sres));
      r.line("brute_force_symmetric sym=" + fmt_num(sres.value) +
             " states=" + std::to_string(sres.states));
    }
  }
  r.emit();
}

void cmd_gap(const Options& o) {
  const MultiwaySource s = load_multiway(o);
  Report r(o);
  const SolveReport rel = run_solve(s.inst, o, r);
  const BestRounding best = best_rounding(s.inst, rel.assignment);
  r.field("best_rounding", json{{"value", best.value}, {"theta", best.theta}});
  r.line("best_rounding value=" + fmt_num(best.value));
  const BruteForceResult opt = brute_force_partition(s.inst, o.threads);
  r.field("brute_force_partition", brute_fields(opt));
  r.line("brute_force_partition opt=" + fmt_num(opt.value) +
         " states=" + std::to_string(opt.states));
  r.field("integral_opt", opt.value);
  if (s.sym) {
    const BruteForceResult sym = brute_force_symmetric(s.inst, *s.sym);
    r.field("brute_force_symmetric", brute_fields(sym));
    r.line("brute_force_symmetric sym=" + fmt_num(sym.value) +
           " states=" + std::to_string(sym.states));
    const double ratio = sym.value / opt.value;
    r.field("symmetric_opt", sym.value);
    r.field("ratio", ratio);
    r.line("ratio=" + fmt_ratio(ratio) +
           " (brute_force_symmetric / brute_force_partition)");
  } else {
    const double ratio = opt.value / rel.value;
    r.field("relaxation_opt", rel.value);
    r.field("ratio", ratio);
    r.line("ratio=" + fmt_ratio(ratio) + " (brute_force_partition / solve_submp_rel)");
  }
  r.emit();
}

void cmd_lp(const Options& o) {
  const CspSource s = load_csp(o);
  Report r(o);
  const BasicLpSolution sol = solve_basic_lp(s.csp);
  json j;
  j["objective"] = sol.objective;
  j["max_residual"] = sol.max_residual;
  r.field("solve_basic_lp", std::move(j));
  r.line("solve_basic_lp objective=" + fmt_num(sol.objective) +
         " max_residual=" + fmt_num(sol.max_residual));
  if (o.certify) {
    if (!s.cert)
      throw DomainError("--certify needs a generator that bundles a certificate (--kind hk)");
    const CertificateReport rep = check_certificate(s.csp, *s.cert);
    json jc;
    jc["objective"] = rep.objective;
    jc["max_residual"] = rep.max_residual;
    jc["feasible"] = rep.feasible;
    r.field("check_certificate", std::move(jc));
    r.line("check_certificate objective=" + fmt_num(rep.objective) +
           " feasible=" + (rep.feasible ? std::string("yes") : std::string("NO")));
    const CspBruteResult brute = brute_force_csp(s.csp);
    json jb;
    jb["value"] = brute.value;
    jb["labels"] = brute.labels;
    jb["states"] = brute.states;
    r.field("brute_force_csp", std::move(jb));
    r.line("brute_force_csp value=" + fmt_num(brute.value) +
           " states=" + std::to_string(brute.states));
  }
  r.emit();
}

void cmd_compare(const Options& o) {
  const MultiwaySource s = load_multiway(o);
  Report r(o);
  const CompareReport rep = compare_relaxations(s.inst);
  json j;
  j["lovasz_value"] = rep.lovasz_value;
  j["basic_value"] = rep.basic_value;
  j["delta"] = rep.delta;
  j["separated"] = rep.separated;
  r.field("compare_relaxations", std::move(j));
  r.line("compare_relaxations lovasz=" + fmt_num(rep.lovasz_value) +
         " basic=" + fmt_num(rep.basic_value) + " delta=" + fmt_num(rep.delta));
  r.line(rep.separated ? "SEPARATED" : "NOT-SEPARATED");
  r.emit();
}

void add_common(CLI::App* cmd, Options& o, bool with_input) {
  cmd->add_option("--kind", o.kind, "instance family");
  if (with_input) cmd->add_option("input", o.input, "instance document (JSON)");
  cmd->add_option("--k", o.k, "number of parts / labels");
  cmd->add_option("--gamma", o.gamma, "profile parameter (-1 = family default)");
  cmd->add_option("--n", o.n, "ground-set size for random families");
  cmd->add_option("--m", o.m, "edge count for random families");
  cmd->add_option("--seed", o.seed, "64-bit seed recorded in the report");
  cmd->add_option("--max-iters", o.max_iters, "subgradient iteration budget");
  cmd->add_option("--tol", o.tol, "subgradient stall tolerance");
  cmd->add_option("--threads", o.threads, "brute-force worker threads");
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular multiway partition workbench"};
  app.require_subcommand(1);
  Options o;

  CLI::App* gen = app.add_subcommand("gen", "generate an instance document");
  add_common(gen, o, false);
  CLI::App* solve = app.add_subcommand("solve", "relax: projected subgradient + exact refine");
  add_common(solve, o, true);
  CLI::App* round = app.add_subcommand("round", "threshold rounding of an assignment");
  add_common(round, o, true);
  round->add_option("assignment", o.assignment, "assignment document (JSON)");
  CLI::App* brute = app.add_subcommand("brute", "exhaustive optimum");
  add_common(brute, o, true);
  CLI::App* gap = app.add_subcommand("gap", "generate, relax, round, brute: full gap report");
  add_common(gap, o, true);
  CLI::App* lp = app.add_subcommand("lp", "basic LP of a label CSP");
  add_common(lp, o, true);
  lp->add_flag("--certify", o.certify, "audit the bundled certificate and brute force");
  CLI::App* compare = app.add_subcommand("compare", "extension relaxation vs basic LP");
  add_common(compare, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) o.command = "gen", cmd_gen(o);
    if (solve->parsed()) o.command = "solve", cmd_solve(o);
    if (round->parsed()) o.command = "round", cmd_round(o);
    if (brute->parsed()) o.command = "brute", cmd_brute(o);
    if (gap->parsed()) o.command = "gap", cmd_gap(o);
    if (lp->parsed()) o.command = "lp", cmd_lp(o);
    if (compare->parsed()) o.command = "compare", cmd_compare(o);
  } catch (const InfeasibleError& e) {
    std::fprintf(stderr, "infeasible: %s (witness %.6g)\n", e.what(), e.witness);
    return 2;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "budget exceeded: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
