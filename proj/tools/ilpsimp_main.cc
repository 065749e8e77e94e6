// Copyright 2026 The ilpsimp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: preprocess, solve, verify and batch statistics.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ilpsimp/error.h"
#include "ilpsimp/ilp_model.h"
#include "ilpsimp/oracle.h"
#include "ilpsimp/pipeline.h"
#include "ilpsimp/reconstruct.h"
#include "ilpsimp/wcnf.h"

namespace {

using namespace ilpsimp;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerification = 3;
constexpr int kExitUnsat = 20;

struct CommonFlags {
  int rounds = 10;
  int probe_limit = 10000;
  bool no_multi_aggr = false;
  std::int64_t bdd_limit = 100000;
  std::vector<std::int64_t> size_guard;
  std::string dialect = "mse";

  void Register(CLI::App* app) {
    app->add_option("--rounds", rounds, "presolve round limit")->check(CLI::NonNegativeNumber);
    app->add_option("--probe-limit", probe_limit, "probing budget")->check(CLI::NonNegativeNumber);
    app->add_flag("--no-multi-aggr", no_multi_aggr, "disable multi-aggregation");
    app->add_option("--bdd-limit", bdd_limit, "BDD node limit before the adder fallback")
        ->check(CLI::PositiveNumber);
    app->add_option("--size-guard", size_guard, "max vars,clauses to preprocess")
        ->delimiter(',')
        ->expected(2);
    app->add_option("--dialect", dialect, "output dialect")
        ->check(CLI::IsMember({"mse", "legacy"}));
  }

  PipelineConfig ToConfig() const {
    PipelineConfig c;
    c.presolve.max_rounds = rounds;
    c.presolve.probe_limit = probe_limit;
    c.presolve.probing = probe_limit > 0;
    c.presolve.multi_aggregation = !no_multi_aggr;
    c.encode.bdd_node_limit = bdd_limit;
    if (size_guard.size() == 2) {
      c.size_guard_vars = static_cast<int>(size_guard[0]);
      c.size_guard_clauses = size_guard[1];
    }
    c.output_dialect = dialect == "legacy" ? Dialect::kLegacy : Dialect::kMse22;
    return c;
  }
};

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path);
}

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int RunPreprocess(const std::string& input, const std::string& out_path,
                  const std::string& map_path, const std::string& lp_path,
                  const CommonFlags& flags, bool timings) {
  const WcnfInstance origin = ReadWcnfFile(input);
  const PipelineConfig config = flags.ToConfig();
  PreprocessOutcome pre = Preprocess(origin, config);
  RunStats stats = ComputeStats(origin, pre.simp ? &*pre.simp : nullptr,
                                pre.report ? &*pre.report : nullptr);
  stats.gate_decision = pre.decision;
  if (pre.simp) {
    stats.gate_decision = PassesGate(origin, *pre.simp, config.gate)
                              ? GateDecision::kUsedSimplified
                              : GateDecision::kUsedOriginal;
  }
  if (!lp_path.empty() && pre.model) WriteText(lp_path, WriteLp(*pre.model));
  if (pre.decision == GateDecision::kPresolveInfeasible) {
    std::cerr << "presolve proved the instance infeasible\n";
    std::cout << "s UNSATISFIABLE\n";
    return kExitUnsat;
  }
  if (pre.simp) {
    const std::string text = WriteWcnf(*pre.simp, config.output_dialect);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      WriteText(out_path, text);
    }
    if (!map_path.empty()) WriteText(map_path, RecordToJson(*pre.record));
  }
  std::cerr << StatsToJson(stats, timings) << "\n";
  return kExitOk;
}

int RunSolve(const std::string& input, const SolverSpec& solver, const std::string& gate,
             const std::string& stats_path, const CommonFlags& flags, bool timings) {
  const WcnfInstance origin = ReadWcnfFile(input);
  PipelineConfig config = flags.ToConfig();
  config.solver = solver;
  config.gate = gate == "always" ? GateMode::kAlways
                : gate == "never" ? GateMode::kNever
                                  : GateMode::kPaper;
  PipelineResult result;
  try {
    result = RunPipeline(origin, config);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kVerificationFailure) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitVerification;
    }
    throw;
  }
  if (!stats_path.empty()) WriteText(stats_path, StatsToJson(result.stats, timings) + "\n");
  std::cout << FormatSolverOutput(result.status, result.cost,
                                  result.witness ? &*result.witness : nullptr);
  switch (result.status) {
    case SolverStatus::kOptimum: return kExitOk;
    case SolverStatus::kUnsat: return kExitUnsat;
    default: return kExitError;
  }
}

int RunVerify(const std::string& input, const std::string& solution_path,
              const std::string& map_path, const std::string& simp_path) {
  const WcnfInstance origin = ReadWcnfFile(input);
  const std::string text = ReadText(solution_path);
  Assignment origin_sol;
  Weight claimed = 0;
  if (!map_path.empty()) {
    if (simp_path.empty()) throw Error(ErrorCode::kInvalidArgument, "--map needs --simp");
    const WcnfInstance simp = ReadWcnfFile(simp_path);
    const ReconstructionRecord rec = RecordFromJson(ReadText(map_path));
    const SolverOutput out = ParseSolverOutput(text, simp.num_vars);
    if (out.status == SolverStatus::kUnsat) {
      std::cout << "s UNSATISFIABLE\n";
      return kExitUnsat;
    }
    const Evaluation eval = Evaluate(simp, *out.assignment);
    if (!eval.feasible) {
      std::cout << "FAIL HardViolation (simplified instance)\n";
      return kExitVerification;
    }
    claimed = eval.cost;
    origin_sol = Reconstruct(*out.assignment, rec);
  } else {
    const SolverOutput out = ParseSolverOutput(text, origin.num_vars);
    if (out.status == SolverStatus::kUnsat) {
      std::cout << "s UNSATISFIABLE\n";
      return kExitUnsat;
    }
    origin_sol = *out.assignment;
    const Evaluation eval = Evaluate(origin, origin_sol);
    claimed = out.cost.value_or(eval.cost);
  }
  const Verdict verdict = VerifyOptimal(origin, origin_sol, claimed);
  if (verdict.ok()) {
    std::cout << "PASS cost " << *verdict.cost << (verdict.oracle_checked ? " optimal" : "")
              << "\n";
    return kExitOk;
  }
  std::cout << "FAIL";
  for (VerdictFailure f : verdict.failures) {
    std::cout << (f == VerdictFailure::kHardViolation  ? " HardViolation"
                  : f == VerdictFailure::kCostMismatch ? " CostMismatch"
                                                       : " NotOptimal");
  }
  std::cout << "\n";
  return kExitVerification;
}

int RunStatsDir(const std::string& dir, const std::string& json_path, const CommonFlags& flags,
                bool timings) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wcnf") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  const PipelineConfig config = flags.ToConfig();
  std::ostringstream lines;
  std::vector<RunStats> runs;
  for (const auto& path : files) {
    const WcnfInstance origin = ReadWcnfFile(path.string());
    PreprocessOutcome pre = Preprocess(origin, config);
    RunStats stats = ComputeStats(origin, pre.simp ? &*pre.simp : nullptr,
                                  pre.report ? &*pre.report : nullptr);
    stats.gate_decision = pre.decision;
    if (pre.simp && PassesGate(origin, *pre.simp, config.gate)) {
      stats.gate_decision = GateDecision::kUsedSimplified;
    }
    std::string line = StatsToJson(stats, timings);
    line.insert(1, "\"instance\":\"" + path.filename().string() + "\",");
    lines << line << "\n";
    runs.push_back(stats);
  }
  lines << SummaryToJson(Summarize(runs)) << "\n";
  if (json_path.empty()) {
    std::cout << lines.str();
  } else {
    WriteText(json_path, lines.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MaxSAT preprocessing through ILP presolve"};
  app.require_subcommand(1);
  app.fallthrough();
  bool timings = false;
  app.add_flag("--timings", timings, "include wall-clock fields in stats");

  CommonFlags flags;
  std::string input;

  auto* pre = app.add_subcommand("preprocess", "simplify an instance");
  std::string out_path;
  std::string map_path;
  std::string lp_path;
  pre->add_option("input", input, "WCNF file")->required();
  pre->add_option("--out", out_path, "simplified WCNF (stdout if absent)");
  pre->add_option("--map", map_path, "reconstruction record (JSON)");
  pre->add_option("--lp", lp_path, "write the ILP model in LP format");
  flags.Register(pre);

  auto* solve = app.add_subcommand("solve", "preprocess, solve, reconstruct, verify");
  SolverSpec solver;
  std::string solver_name = "builtin";
  std::string gate = "paper";
  std::string stats_path;
  solve->add_option("input", input, "WCNF file")->required();
  solve->add_option("--solver", solver_name, "solver")->check(CLI::IsMember({"builtin"}));
  auto* cmd_opt = solve->add_option("--solver-cmd", solver.command,
                                    "external solver template with {input} and {timeout}");
  solve->add_option("--gate", gate, "gate mode")
      ->check(CLI::IsMember({"paper", "always", "never"}));
  solve->add_option("--time-limit", solver.time_limit_seconds, "solver wall-clock limit (s)")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--stats", stats_path, "write run statistics (JSON line)");
  cmd_opt->excludes(solve->get_option("--solver"));
  flags.Register(solve);

  auto* verify = app.add_subcommand("verify", "check a solution against an instance");
  std::string solution_path;
  std::string simp_path;
  verify->add_option("input", input, "original WCNF file")->required();
  verify->add_option("--solution", solution_path, "solver output (s/o/v lines)")->required();
  verify->add_option("--map", map_path, "record, when the solution is for the simplified instance");
  verify->add_option("--simp", simp_path, "simplified WCNF, required with --map");

  auto* stats = app.add_subcommand("stats", "batch statistics over a directory");
  std::string dir;
  std::string json_path;
  stats->add_option("dir", dir, "directory of .wcnf files")->required()->check(CLI::ExistingDirectory);
  stats->add_option("--json", json_path, "output JSON lines file");
  flags.Register(stats);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) return RunPreprocess(input, out_path, map_path, lp_path, flags, timings);
    if (*solve) return RunSolve(input, solver, gate, stats_path, flags, timings);
    if (*verify) return RunVerify(input, solution_path, map_path, simp_path);
    if (*stats) return RunStatsDir(dir, json_path, flags, timings);
  } catch (const Error& e) {
    std::cerr << "error: " << ErrorCodeName(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::kVerificationFailure ? kExitVerification : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
