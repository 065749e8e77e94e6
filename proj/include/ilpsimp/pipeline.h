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

#ifndef ILPSIMP_PIPELINE_H_
#define ILPSIMP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ilpsimp/encode.h"
#include "ilpsimp/presolve.h"
#include "ilpsimp/reconstruct.h"
#include "ilpsimp/wcnf.h"

namespace ilpsimp {

enum class GateMode { kPaper, kAlways, kNever };

enum class GateDecision {
  kUsedSimplified,
  kUsedOriginal,
  kPreprocessSkipped,
  kPresolveInfeasible,
};

std::string_view GateDecisionName(GateDecision d);

struct SolverSpec {
  // Empty command selects the builtin oracle.
  std::string command;
  double time_limit_seconds = 0;  // 0 = none
  // Builtin: brute force up to this many variables, branch and bound above.
  int brute_force_max_vars = 20;
  std::int64_t node_budget = 50'000'000;
};

struct PipelineConfig {
  PresolveConfig presolve;
  EncodeConfig encode;
  GateMode gate = GateMode::kPaper;
  SolverSpec solver;
  int size_guard_vars = 200'000;
  std::int64_t size_guard_clauses = 1'000'000;
  VerifyConfig verify;
  Dialect output_dialect = Dialect::kMse22;
};

struct RunStats {
  int origin_vars = 0;
  std::int64_t origin_hard = 0;
  std::int64_t origin_soft = 0;
  Weight origin_soft_weight_total = 0;
  std::optional<int> simp_vars;
  std::optional<std::int64_t> simp_hard;
  std::optional<std::int64_t> simp_soft;
  std::optional<Weight> simp_soft_weight_total;
  std::optional<double> delta_vars_pct;
  std::optional<double> delta_clauses_pct;
  std::optional<double> fixed_vars_rate;
  std::optional<double> aggr_vars_rate;
  std::optional<double> simple_aggr_ratio;
  double preprocessing_time_seconds = 0;
  GateDecision gate_decision = GateDecision::kUsedOriginal;
  double solve_time_seconds = 0;
  std::optional<Weight> final_cost;
  bool verified = false;
};

// simp and report are both present or both null.
RunStats ComputeStats(const WcnfInstance& origin, const WcnfInstance* simp,
                      const PresolveReport* report);

// One flat JSON object, no trailing newline. Timing fields only with
// `timings`, so that default output is reproducible.
std::string StatsToJson(const RunStats& stats, bool timings);

// Means over the instances grouped by whether the simplified instance was
// smaller (gate passed) or not. Instances never preprocessed are left out.
struct GroupMeans {
  int instances = 0;
  double fixed_vars_rate = 0;
  double aggr_vars_rate = 0;
  double simple_aggr_ratio = 0;
  double delta_vars_pct = 0;
  double delta_clauses_pct = 0;
};

struct BatchSummary {
  GroupMeans smaller;
  GroupMeans bigger;
  GroupMeans all;
};

BatchSummary Summarize(const std::vector<RunStats>& runs);
std::string SummaryToJson(const BatchSummary& summary);

struct PreprocessOutcome {
  GateDecision decision = GateDecision::kUsedOriginal;  // Skipped/Infeasible or pending gate
  std::optional<WcnfInstance> simp;
  std::optional<ReconstructionRecord> record;
  std::optional<PresolveReport> report;
  std::optional<IlpModel> model;  // the model handed to presolve
};

// Stage 1. decision is kPreprocessSkipped, kPresolveInfeasible or
// kUsedOriginal (meaning: simp is available, gate not applied yet).
PreprocessOutcome Preprocess(const WcnfInstance& origin, const PipelineConfig& config);

bool PassesGate(const WcnfInstance& origin, const WcnfInstance& simp, GateMode mode);

// Runs `command` through /bin/sh with {input} and {timeout} substituted and
// returns stdout. Throws kTimeout past the limit, kSolverFailure on a
// nonzero exit without an `s` line.
std::string InvokeExternalSolver(const std::string& command, const std::string& input_path,
                                 double time_limit_seconds);

// Solves with the builtin oracle or an external command.
SolverOutput SolveInstance(const WcnfInstance& instance, const SolverSpec& spec);

struct PipelineResult {
  SolverStatus status = SolverStatus::kUnknown;
  std::optional<Weight> cost;
  std::optional<Assignment> witness;  // over the original instance
  RunStats stats;
};

// Stages 1-3. Throws kVerificationFailure rather than return an unchecked
// witness.
PipelineResult RunPipeline(const WcnfInstance& origin, const PipelineConfig& config);

}  // namespace ilpsimp

#endif  // ILPSIMP_PIPELINE_H_
