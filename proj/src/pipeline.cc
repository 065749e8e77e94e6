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

#include "ilpsimp/pipeline.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <json.hpp>
#include <variant>

#include "ilpsimp/error.h"
#include "ilpsimp/ilp_model.h"
#include "ilpsimp/oracle.h"

namespace ilpsimp {

using nlohmann::ordered_json;

namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::int64_t ClauseCount(const WcnfInstance& inst) {
  return static_cast<std::int64_t>(inst.hard.size() + inst.soft.size());
}

double Pct(double from, double to) { return (to - from) / from * 100.0; }

}  // namespace

std::string_view GateDecisionName(GateDecision d) {
  switch (d) {
    case GateDecision::kUsedSimplified: return "UsedSimplified";
    case GateDecision::kUsedOriginal: return "UsedOriginal";
    case GateDecision::kPreprocessSkipped: return "PreprocessSkipped";
    case GateDecision::kPresolveInfeasible: return "PresolveInfeasible";
  }
  return "?";
}

RunStats ComputeStats(const WcnfInstance& origin, const WcnfInstance* simp,
                      const PresolveReport* report) {
  RunStats s;
  s.origin_vars = origin.num_vars;
  s.origin_hard = static_cast<std::int64_t>(origin.hard.size());
  s.origin_soft = static_cast<std::int64_t>(origin.soft.size());
  s.origin_soft_weight_total = origin.SoftWeightTotal();
  if (simp != nullptr) {
    s.simp_vars = simp->num_vars;
    s.simp_hard = static_cast<std::int64_t>(simp->hard.size());
    s.simp_soft = static_cast<std::int64_t>(simp->soft.size());
    s.simp_soft_weight_total = simp->SoftWeightTotal();
    if (origin.num_vars > 0) s.delta_vars_pct = Pct(origin.num_vars, simp->num_vars);
    if (ClauseCount(origin) > 0) {
      s.delta_clauses_pct =
          Pct(static_cast<double>(ClauseCount(origin)), static_cast<double>(ClauseCount(*simp)));
    }
  }
  if (report != nullptr) {
    s.fixed_vars_rate = report->FixedVarsRate();
    s.aggr_vars_rate = report->AggrVarsRate();
    s.simple_aggr_ratio = report->SimpleAggrRatio();
    s.preprocessing_time_seconds = report->preprocessing_time_seconds;
  }
  return s;
}

std::string StatsToJson(const RunStats& s, bool timings) {
  ordered_json j;
  auto opt = [&](const char* key, const auto& v) {
    if (v) {
      j[key] = *v;
    } else {
      j[key] = nullptr;
    }
  };
  j["originVars"] = s.origin_vars;
  j["originHard"] = s.origin_hard;
  j["originSoft"] = s.origin_soft;
  j["originSoftWeightTotal"] = s.origin_soft_weight_total;
  opt("simpVars", s.simp_vars);
  opt("simpHard", s.simp_hard);
  opt("simpSoft", s.simp_soft);
  opt("simpSoftWeightTotal", s.simp_soft_weight_total);
  opt("deltaVarsPct", s.delta_vars_pct);
  opt("deltaClausesPct", s.delta_clauses_pct);
  opt("fixedVarsRate", s.fixed_vars_rate);
  opt("aggrVarsRate", s.aggr_vars_rate);
  opt("simpleAggrRatio", s.simple_aggr_ratio);
  j["gateDecision"] = GateDecisionName(s.gate_decision);
  opt("finalCost", s.final_cost);
  j["verified"] = s.verified;
  if (timings) {
    j["preprocessingTimeSeconds"] = s.preprocessing_time_seconds;
    j["solveTimeSeconds"] = s.solve_time_seconds;
  }
  return j.dump();
}

namespace {

void Accumulate(GroupMeans& g, const RunStats& s) {
  ++g.instances;
  g.fixed_vars_rate += s.fixed_vars_rate.value_or(0);
  g.aggr_vars_rate += s.aggr_vars_rate.value_or(0);
  g.simple_aggr_ratio += s.simple_aggr_ratio.value_or(1);
  g.delta_vars_pct += s.delta_vars_pct.value_or(0);
  g.delta_clauses_pct += s.delta_clauses_pct.value_or(0);
}

void Finalize(GroupMeans& g) {
  if (g.instances == 0) return;
  const double n = g.instances;
  g.fixed_vars_rate /= n;
  g.aggr_vars_rate /= n;
  g.simple_aggr_ratio /= n;
  g.delta_vars_pct /= n;
  g.delta_clauses_pct /= n;
}

ordered_json GroupJson(const GroupMeans& g) {
  ordered_json j;
  j["instances"] = g.instances;
  j["fixedVarsRate"] = g.fixed_vars_rate;
  j["aggrVarsRate"] = g.aggr_vars_rate;
  j["simpleAggrRatio"] = g.simple_aggr_ratio;
  j["deltaVarsPct"] = g.delta_vars_pct;
  j["deltaClausesPct"] = g.delta_clauses_pct;
  return j;
}

}  // namespace

BatchSummary Summarize(const std::vector<RunStats>& runs) {
  BatchSummary out;
  for (const RunStats& s : runs) {
    if (!s.simp_vars) continue;
    const bool smaller = *s.simp_vars < s.origin_vars && *s.simp_hard < s.origin_hard;
    Accumulate(smaller ? out.smaller : out.bigger, s);
    Accumulate(out.all, s);
  }
  Finalize(out.smaller);
  Finalize(out.bigger);
  Finalize(out.all);
  return out;
}

std::string SummaryToJson(const BatchSummary& summary) {
  ordered_json j;
  j["summary"] = {{"smaller", GroupJson(summary.smaller)},
                  {"bigger", GroupJson(summary.bigger)},
                  {"all", GroupJson(summary.all)}};
  return j.dump();
}

PreprocessOutcome Preprocess(const WcnfInstance& origin, const PipelineConfig& config) {
  PreprocessOutcome out;
  if (origin.num_vars > config.size_guard_vars ||
      ClauseCount(origin) > config.size_guard_clauses) {
    out.decision = GateDecision::kPreprocessSkipped;
    return out;
  }
  if (origin.HasEmptyHardClause()) {
    out.decision = GateDecision::kPresolveInfeasible;
    return out;
  }
  IlpModel model = BuildIlp(origin);
  PresolveResult presolved = Presolve(model, config.presolve);
  out.model = std::move(model);
  auto* simp = std::get_if<SimplifiedModel>(&presolved);
  if (simp == nullptr) {
    out.decision = GateDecision::kPresolveInfeasible;
    return out;
  }
  auto encoded = EncodeModel(*simp, config.encode);
  if (auto* bad = std::get_if<Unencodable>(&encoded)) {
    throw Error(ErrorCode::kUnencodable, "row " + std::to_string(bad->row) + " of class " +
                                             std::string(ConstraintClassName(bad->cls)));
  }
  EncodedModel& em = std::get<EncodedModel>(encoded);
  out.record = MakeRecord(*simp, em, origin.num_vars);
  out.report = simp->report;
  out.simp = std::move(em.instance);
  out.decision = GateDecision::kUsedOriginal;
  return out;
}

bool PassesGate(const WcnfInstance& origin, const WcnfInstance& simp, GateMode mode) {
  switch (mode) {
    case GateMode::kAlways: return true;
    case GateMode::kNever: return false;
    case GateMode::kPaper:
      return simp.num_vars < origin.num_vars && simp.hard.size() < origin.hard.size();
  }
  return false;
}

std::string InvokeExternalSolver(const std::string& command, const std::string& input_path,
                                 double time_limit_seconds) {
  std::string cmd = command;
  auto replace_all = [&](const std::string& key, const std::string& value) {
    for (std::size_t p = cmd.find(key); p != std::string::npos; p = cmd.find(key, p + value.size())) {
      cmd.replace(p, key.size(), value);
    }
  };
  replace_all("{input}", input_path);
  replace_all("{timeout}", std::to_string(static_cast<long long>(time_limit_seconds)));

  int fds[2];
  if (pipe(fds) != 0) throw Error(ErrorCode::kSolverFailure, "pipe() failed");
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw Error(ErrorCode::kSolverFailure, "fork() failed");
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);

  std::string output;
  const auto start = std::chrono::steady_clock::now();
  bool timed_out = false;
  char buf[4096];
  while (true) {
    int wait_ms = -1;
    if (time_limit_seconds > 0) {
      const double left = time_limit_seconds - SecondsSince(start);
      if (left <= 0) {
        timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(left * 1000) + 1;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int r = poll(&pfd, 1, wait_ms);
    if (r < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (r == 0) continue;
    const ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  if (timed_out) kill(-pid, SIGKILL);
  int status = 0;
  waitpid(pid, &status, 0);
  if (timed_out) {
    throw Error(ErrorCode::kTimeout, "solver exceeded " + std::to_string(time_limit_seconds) + " s");
  }
  const bool clean = WIFEXITED(status) && WEXITSTATUS(status) == 0;
  if (!clean) {
    const bool has_status = output.starts_with("s ") || output.find("\ns ") != std::string::npos;
    if (!has_status) {
      throw Error(ErrorCode::kSolverFailure, "solver exited abnormally without an s line");
    }
  }
  return output;
}

namespace {

SolverOutput FromOracle(const OracleResult& r) {
  SolverOutput out;
  if (r.status == OracleStatus::kUnsat) {
    out.status = SolverStatus::kUnsat;
    return out;
  }
  out.status = SolverStatus::kOptimum;
  out.cost = r.cost;
  out.assignment = r.witness;
  return out;
}

}  // namespace

SolverOutput SolveInstance(const WcnfInstance& instance, const SolverSpec& spec) {
  if (spec.command.empty()) {
    if (instance.num_vars <= spec.brute_force_max_vars) return FromOracle(BruteForce(instance));
    auto r = BranchAndBound(instance, spec.node_budget);
    if (auto* budget = std::get_if<BudgetExceeded>(&r)) {
      throw Error(ErrorCode::kSolverFailure,
                  "builtin search gave up after " + std::to_string(budget->nodes) + " nodes");
    }
    return FromOracle(std::get<OracleResult>(r));
  }
  // External solvers read a file; write the MSE dialect to a private path.
  char path[] = "/tmp/ilpsimp-XXXXXX";
  const int fd = mkstemp(path);
  if (fd < 0) throw Error(ErrorCode::kIoError, "cannot create temporary file");
  close(fd);
  const std::string wcnf_path = std::string(path);
  std::string text;
  try {
    WriteWcnfFile(instance, Dialect::kMse22, wcnf_path);
    text = InvokeExternalSolver(spec.command, wcnf_path, spec.time_limit_seconds);
  } catch (...) {
    std::filesystem::remove(wcnf_path);
    throw;
  }
  std::filesystem::remove(wcnf_path);
  try {
    return ParseSolverOutput(text, instance.num_vars);
  } catch (const Error& e) {
    throw Error(ErrorCode::kSolverFailure, std::string("unparsable solver output: ") + e.what());
  }
}

PipelineResult RunPipeline(const WcnfInstance& origin, const PipelineConfig& config) {
  PipelineResult result;
  PreprocessOutcome pre = Preprocess(origin, config);
  result.stats = ComputeStats(origin, pre.simp ? &*pre.simp : nullptr,
                              pre.report ? &*pre.report : nullptr);

  if (pre.decision == GateDecision::kPresolveInfeasible) {
    result.stats.gate_decision = pre.decision;
    result.status = SolverStatus::kUnsat;
    result.stats.verified = true;
    return result;
  }

  const bool use_simp =
      pre.decision != GateDecision::kPreprocessSkipped && PassesGate(origin, *pre.simp, config.gate);
  if (pre.decision == GateDecision::kPreprocessSkipped) {
    result.stats.gate_decision = GateDecision::kPreprocessSkipped;
  } else {
    result.stats.gate_decision =
        use_simp ? GateDecision::kUsedSimplified : GateDecision::kUsedOriginal;
  }

  const WcnfInstance& target = use_simp ? *pre.simp : origin;
  const auto start = std::chrono::steady_clock::now();
  SolverOutput solved = SolveInstance(target, config.solver);
  result.stats.solve_time_seconds = SecondsSince(start);

  result.status = solved.status;
  if (solved.status == SolverStatus::kUnsat) {
    result.stats.verified = true;
    return result;
  }
  if (!solved.assignment) {
    result.status = SolverStatus::kUnknown;
    return result;
  }

  // Costs are recomputed from the witness: external solvers do not see the
  // cost offset comment, so their `o` line cannot be compared directly.
  Assignment sol = *solved.assignment;
  sol.resize(target.num_vars);
  const Evaluation target_eval = Evaluate(target, sol);
  if (!target_eval.feasible) {
    throw Error(ErrorCode::kVerificationFailure, "solver witness violates a hard clause");
  }
  Assignment origin_sol = use_simp ? Reconstruct(sol, *pre.record) : sol;
  VerifyConfig verify = config.verify;
  if (solved.status != SolverStatus::kOptimum) verify.oracle_var_limit = -1;
  const Verdict verdict = VerifyOptimal(origin, origin_sol, target_eval.cost, verify);
  if (!verdict.ok()) {
    std::string why;
    for (VerdictFailure f : verdict.failures) {
      why += f == VerdictFailure::kHardViolation  ? " HardViolation"
             : f == VerdictFailure::kCostMismatch ? " CostMismatch"
                                                  : " NotOptimal";
    }
    throw Error(ErrorCode::kVerificationFailure, "witness rejected:" + why);
  }
  result.cost = target_eval.cost;
  result.witness = std::move(origin_sol);
  result.stats.final_cost = result.cost;
  result.stats.verified = true;
  return result;
}

}  // namespace ilpsimp
