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

#ifndef ILPSIMP_PRESOLVE_H_
#define ILPSIMP_PRESOLVE_H_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ilpsimp/ilp_model.h"

namespace ilpsimp {

struct PresolveConfig {
  int max_rounds = 10;
  bool probing = true;
  // Total number of probe calls over the whole presolve run.
  int probe_limit = 10000;
  bool multi_aggregation = true;
  // Fix or aggregate columns that occur in at most one row, using the sign
  // of their objective coefficient.
  bool dual_singletons = true;
};

enum class DispositionKind { kFree, kFixed, kSimpleAggregated, kMultiAggregated };

struct VarDisposition {
  DispositionKind kind = DispositionKind::kFree;
  int value = 0;         // kFixed
  int target = -1;       // kSimpleAggregated
  bool negated = false;  // kSimpleAggregated: y = 1 - target
  std::int64_t c0 = 0;   // kMultiAggregated: y = c0 + sum(terms)
  std::vector<Term> terms;

  static VarDisposition Free() { return {}; }
  static VarDisposition Fixed(int value) {
    VarDisposition d;
    d.kind = DispositionKind::kFixed;
    d.value = value;
    return d;
  }
  static VarDisposition Simple(int target, bool negated) {
    VarDisposition d;
    d.kind = DispositionKind::kSimpleAggregated;
    d.target = target;
    d.negated = negated;
    return d;
  }
  static VarDisposition Multi(std::int64_t c0, std::vector<Term> terms) {
    VarDisposition d;
    d.kind = DispositionKind::kMultiAggregated;
    d.c0 = c0;
    d.terms = std::move(terms);
    return d;
  }

  friend bool operator==(const VarDisposition&, const VarDisposition&) = default;
};

struct VarMap {
  std::vector<VarDisposition> dispositions;
  // Free variable -> contiguous index, -1 for everything else.
  std::vector<int> new_index_of;
  int free_count = 0;

  friend bool operator==(const VarMap&, const VarMap&) = default;
};

struct Infeasible {
  std::string reason;
};

// Collapses aggregation chains onto Free or Fixed terminals, composes
// polarities, turns aggregation onto a fixed value into a fixing, rewrites
// multi-aggregations over Free variables only and assigns new indices.
// Cycles with odd composed negation are infeasible. Idempotent.
std::variant<VarMap, Infeasible> Canonicalize(std::vector<VarDisposition> dispositions);

struct PresolveReport {
  int decision_vars = 0;
  int fixed_decision_vars = 0;
  int simple_aggr_decision_vars = 0;
  int multi_aggr_decision_vars = 0;
  int fixed_vars = 0;  // over all model variables
  int aggregated_vars = 0;
  int removed_constraints = 0;
  int probes = 0;
  int rounds_executed = 0;
  double preprocessing_time_seconds = 0.0;

  double FixedVarsRate() const;
  double AggrVarsRate() const;
  // 1 when nothing was aggregated.
  double SimpleAggrRatio() const;
};

struct SimplifiedModel {
  // Variables are renumbered: model variable i is the Free original variable
  // whose var_map.new_index_of equals i.
  IlpModel model;
  VarMap var_map;
  // Variables of the model handed to presolve, indexed like var_map.
  std::vector<IlpVar> original_vars;
  // Objective value carried by eliminated variables.
  std::int64_t objective_offset_delta = 0;
  PresolveReport report;
};

using PresolveResult = std::variant<SimplifiedModel, Infeasible>;

struct ProbeResult {
  bool infeasible = false;
  std::vector<std::pair<int, int>> fixings;  // (var, value)
  struct Aggregation {
    int var;
    int onto;
    bool negated;
  };
  std::vector<Aggregation> aggregations;

  bool empty() const { return !infeasible && fixings.empty() && aggregations.empty(); }
};

// Working state of one presolve run. Each step can be driven on its own;
// steps return false once the model is proved infeasible. Variables keep
// their original indices until Finish().
class Presolver {
 public:
  Presolver(IlpModel model, PresolveConfig config);

  bool PropagateBounds();
  bool Substitute();
  bool RemoveRedundant();
  bool Deduplicate();
  bool DetectAggregations();
  bool DualSingletons();
  // Side-effect free apart from bringing rows up to date.
  ProbeResult ProbeVariable(int var);
  bool ProbeAll();

  // One full round; sets *changed when anything was reduced.
  bool RunRound(bool* changed);

  PresolveResult Finish();

  bool infeasible() const { return infeasible_; }
  bool is_fixed(int var) const;
  int fixed_value(int var) const;
  // Alive rows, for inspection.
  std::vector<LinConstraint> rows() const;
  std::vector<VarDisposition> RawDispositions();
  std::int64_t objective_offset() const;

 private:
  struct Affine {
    __int128 constant = 0;
    std::vector<std::pair<__int128, int>> terms;
  };

  int Find(int v, bool* parity);
  bool Union(int a, int b, bool negated);
  bool Fix(int v, int value);
  Affine Resolve(int v);
  bool RewriteRow(std::size_t r);
  void RewriteObjective();
  void BuildOccurrences();
  bool MarkInfeasible(const std::string& why);
  void Kill(std::size_t r);
  ProbeResult ProbeImpl(int var);
  void EnsureOccurrences();

  // Propagates rows on the worklist to a fixpoint over lo_/hi_; when `trail`
  // is set every bound change is recorded for undo.
  bool PropagateRows(std::vector<std::size_t> worklist, std::vector<int>* trail);
  void ActivityBounds(const LinConstraint& c, __int128* min_act, __int128* max_act) const;

  IlpModel model_;
  PresolveConfig config_;
  std::vector<LinConstraint> rows_;
  std::vector<char> alive_;
  std::vector<std::int8_t> lo_, hi_;
  std::vector<int> parent_;
  std::vector<char> parity_;
  std::vector<char> multi_;
  std::vector<Affine> multi_expr_;
  std::vector<__int128> obj_;
  __int128 obj_offset_ = 0;
  std::vector<std::vector<std::size_t>> occurs_;
  bool occurs_valid_ = false;
  std::vector<char> in_queue_;
  std::vector<char> probed_;
  long long changes_ = 0;
  bool infeasible_ = false;
  std::string infeasible_reason_;
  PresolveReport report_;
};

PresolveResult Presolve(const IlpModel& model, const PresolveConfig& config);

}  // namespace ilpsimp

#endif  // ILPSIMP_PRESOLVE_H_
