// oomi: generate benchmark MDPs, run planners, sweep tables and verify results.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "oomi/harness.hpp"
#include "oomi/mdp_json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConvergence = 1;
constexpr int kExitVerification = 2;
constexpr int kExitUsage = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string domain = "hanoi";
  std::string size = "3";
  bool stochastic = false;
  std::optional<double> slip;
  std::string algo = "oomi";
  double eps = 1e-9;
  std::size_t max_iters = 1'000'000;
  std::string count_mode = "changed";
  std::optional<double> prune;
  std::optional<double> subgoal_k;
  std::string goal_corner = "nw";
  std::string out;
  std::uint64_t seed = 0;
  std::string variant;
  std::optional<double> tol;
  bool render = false;
};

void add_common(CLI::App* cmd, Options& o, bool sweep) {
  cmd->add_option("--domain", o.domain, "hanoi | nine_rooms")->capture_default_str();
  cmd->add_option("--size", o.size,
                  sweep ? "Sizes: a value, a range a-b, or a comma list" : "Discs or level")
      ->capture_default_str();
  cmd->add_flag("--stochastic", o.stochastic, "Use the stochastic variant");
  cmd->add_option("--slip", o.slip, "Slip probability (default 0.4 hanoi, 0.05 nine_rooms)");
  cmd->add_option("--algo", o.algo,
                  sweep ? "Comma list of apmi, aopmi, oomi, or all" : "apmi | aopmi | oomi")
      ->capture_default_str();
  cmd->add_option("--eps", o.eps, "Convergence threshold")->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "Iteration cap")->capture_default_str();
  cmd->add_option("--count-mode", o.count_mode, "changed | recompute")->capture_default_str();
  cmd->add_option("--prune", o.prune, "Drop transition entries at or below this (default 1e-10 stochastic)");
  cmd->add_option("--subgoal-k", o.subgoal_k, "Subgoal reward scale");
  cmd->add_option("--goal-corner", o.goal_corner, "nw | ne | sw | se (nine_rooms)")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output file (default stdout)");
  cmd->add_option("--seed", o.seed, "Seed for Monte-Carlo checks")->capture_default_str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (item.empty()) throw UsageError("empty item in list '" + s + "'");
    out.push_back(item);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

int to_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError("not an integer: '" + s + "'");
}

std::vector<int> parse_sizes(const std::string& s) {
  std::vector<int> sizes;
  for (const std::string& item : split(s, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      sizes.push_back(to_int(item));
      continue;
    }
    const int lo = to_int(item.substr(0, dash));
    const int hi = to_int(item.substr(dash + 1));
    if (lo > hi) throw UsageError("empty size range '" + item + "'");
    for (int v = lo; v <= hi; ++v) sizes.push_back(v);
  }
  return sizes;
}

oomi::RunSpec base_spec(const Options& o) {
  oomi::RunSpec spec;
  spec.domain = oomi::domain_from_string(o.domain);
  spec.stochastic = o.stochastic;
  spec.slip = o.slip;
  spec.config.eps = o.eps;
  spec.config.max_iters = o.max_iters;
  spec.config.count_mode = oomi::count_mode_from_string(o.count_mode);
  spec.prune = o.prune;
  spec.subgoal_scale = o.subgoal_k;
  spec.goal_corner = oomi::corner_from_string(o.goal_corner);
  spec.seed = o.seed;
  return spec;
}

oomi::RunSpec single_spec(const Options& o) {
  oomi::RunSpec spec = base_spec(o);
  spec.size = to_int(o.size);
  spec.algorithm = oomi::algorithm_from_string(o.algo);
  oomi::validate(spec);
  return spec;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + o.out + "' for writing");
  f << text;
}

nlohmann::json report_json(const oomi::RunSpec& spec, const oomi::RunResult& r) {
  const oomi::ExperimentReport& rep = r.report;
  return {{"domain", oomi::to_string(spec.domain)},
          {"variant", spec.stochastic ? "stoch" : "det"},
          {"N", spec.size},
          {"algorithm", oomi::to_string(spec.algorithm)},
          {"n", rep.n},
          {"iterations", rep.iterations},
          {"sweeps", rep.sweeps},
          {"backups_total", rep.backups_total},
          {"backups_per_state", rep.backups_per_state},
          {"converged", rep.converged},
          {"eps", rep.eps},
          {"count_mode", oomi::to_string(rep.count_mode)},
          {"value_at_start", r.value_at_start},
          {"models", rep.model_names},
          {"residuals", rep.per_iteration_residuals},
          {"runtime_ms", r.runtime_ms}};
}

int cmd_gen(const Options& o) {
  const oomi::RunSpec spec = single_spec(o);
  if (o.render) {
    if (spec.domain != oomi::Domain::NineRooms) throw UsageError("--render needs nine_rooms");
    emit(o, oomi::render_nine_rooms(spec.size, spec.goal_corner));
    return kExitOk;
  }
  const oomi::Problem p = oomi::build_problem(spec);
  emit(o, oomi::mdp_to_json(p.mdp) + "\n");
  return kExitOk;
}

int cmd_plan(const Options& o) {
  const oomi::RunSpec spec = single_spec(o);
  const oomi::RunResult r = oomi::run(spec);
  emit(o, report_json(spec, r).dump(2) + "\n");
  if (!r.report.converged) {
    std::cerr << "oomi: planner did not converge within " << spec.config.max_iters
              << " iterations\n";
    return kExitConvergence;
  }
  return kExitOk;
}

int cmd_bench(const Options& o) {
  if (o.variant.empty()) throw UsageError("--variant must be det, stoch or both");
  std::vector<bool> variants;
  for (const std::string& v : split(o.variant, ',')) {
    if (v == "det") {
      variants.push_back(false);
    } else if (v == "stoch") {
      variants.push_back(true);
    } else if (v == "both") {
      variants.push_back(false);
      variants.push_back(true);
    } else {
      throw UsageError("unknown variant '" + v + "'");
    }
  }
  std::vector<oomi::Algorithm> algos;
  if (o.algo == "all") {
    algos = {oomi::Algorithm::Apmi, oomi::Algorithm::Aopmi, oomi::Algorithm::Oomi};
  } else {
    for (const std::string& a : split(o.algo, ',')) algos.push_back(oomi::algorithm_from_string(a));
  }
  std::vector<oomi::RunSpec> specs;
  for (const bool stoch : variants) {
    for (const int size : parse_sizes(o.size)) {
      for (const oomi::Algorithm a : algos) {
        oomi::RunSpec spec = base_spec(o);
        spec.stochastic = stoch;
        spec.size = size;
        spec.algorithm = a;
        oomi::validate(spec);
        specs.push_back(spec);
      }
    }
  }
  const oomi::BenchTable table = oomi::bench_table(specs);
  emit(o, oomi::to_csv(table));
  (o.out.empty() ? std::cerr : std::cout) << oomi::to_text(table);
  return table.all_ok() ? kExitOk : kExitConvergence;
}

int cmd_verify(const Options& o) {
  const oomi::RunSpec spec = single_spec(o);
  const double tol = o.tol.value_or(spec.stochastic ? 1e-4 : 1e-6);
  const oomi::VerificationReport v = oomi::verify(spec, tol);
  nlohmann::json doc = report_json(spec, v.result);
  doc["tol"] = v.tol;
  doc["value_gap"] = v.value_gap;
  doc["oracle_sweeps"] = v.oracle_sweeps;
  doc["builtin_enumeration"] = {{"instances", v.builtin_enumeration.instances},
                                {"max_gap", v.builtin_enumeration.max_gap}};
  if (v.problem_enumeration) {
    doc["problem_enumeration"] = {{"instances", v.problem_enumeration->instances},
                                  {"max_gap", v.problem_enumeration->max_gap}};
  }
  doc["passed"] = v.passed;
  emit(o, doc.dump(2) + "\n");
  if (!v.result.report.converged) return kExitConvergence;
  return v.passed ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Option model planning on Tower of Hanoi and Nine Rooms"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen", "Write a domain MDP as JSON");
  add_common(gen, o, false);
  gen->add_flag("--render", o.render, "Draw the Nine Rooms maze instead");

  auto* plan = app.add_subcommand("plan", "Run one planner and print its report");
  add_common(plan, o, false);

  auto* bench = app.add_subcommand("bench", "Sweep sizes and algorithms into a CSV table");
  add_common(bench, o, true);
  bench->add_option("--variant", o.variant, "det, stoch or both")->required();

  auto* verify = app.add_subcommand("verify", "Check a run against value iteration");
  add_common(verify, o, false);
  verify->add_option("--tol", o.tol, "Max-norm tolerance (default 1e-6 det, 1e-4 stoch)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_gen(o);
    if (*plan) return cmd_plan(o);
    if (*bench) return cmd_bench(o);
    return cmd_verify(o);
  } catch (const UsageError& e) {
    std::cerr << "oomi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const oomi::DomainError& e) {
    std::cerr << "oomi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const oomi::ConfigError& e) {
    std::cerr << "oomi: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "oomi: " << e.what() << '\n';
    return kExitConvergence;
  }
}
