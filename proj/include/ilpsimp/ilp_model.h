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

#ifndef ILPSIMP_ILP_MODEL_H_
#define ILPSIMP_ILP_MODEL_H_

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "ilpsimp/wcnf.h"

namespace ilpsimp {

inline constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
inline constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();

enum class VarKind {
  kDecision,   // one per WCNF variable
  kIndicator,  // one per soft clause
  kAuxiliary,
};

struct IlpVar {
  int lower = 0;
  int upper = 1;
  VarKind kind = VarKind::kDecision;
  // WCNF variable (1-based) for decisions, soft clause index for indicators,
  // -1 otherwise.
  int origin = -1;
};

struct Term {
  std::int64_t coef = 0;
  int var = 0;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class ConstraintClass {
  kLogicalOr,
  kSoftLink,
  kSetppcPacking,
  kSetppcPartitioning,
  kLogicalAnd,
  kGeneralLinear,
  // Rows handed in from outside with no CNF encoding (e.g. solver-specific
  // symmetry constraints). Linear semantics, never produced here.
  kOpaque,
};

std::string_view ConstraintClassName(ConstraintClass cls);

// lhs <= sum(terms) <= rhs, with kNegInf/kPosInf for absent sides. Terms
// carry no zero coefficients and no repeated variables.
//
// kLogicalAnd rows are not linear: terms[0].var is the resultant and the
// remaining terms are its operands; lhs/rhs are ignored.
struct LinConstraint {
  std::vector<Term> terms;
  std::int64_t lhs = kNegInf;
  std::int64_t rhs = kPosInf;
  ConstraintClass cls = ConstraintClass::kGeneralLinear;

  bool has_lhs() const { return lhs != kNegInf; }
  bool has_rhs() const { return rhs != kPosInf; }
  bool is_equality() const { return has_lhs() && lhs == rhs; }

  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

// Always maximized.
struct Objective {
  std::vector<Term> terms;
  std::int64_t offset = 0;
};

struct IlpModel {
  std::vector<IlpVar> vars;
  std::vector<LinConstraint> constraints;
  Objective objective;
  // Sum of soft weights of the source instance.
  Weight soft_weight_total = 0;
  // cost_offset of the source instance, carried through to the re-encoding.
  Weight base_cost_offset = 0;

  int num_vars() const { return static_cast<int>(vars.size()); }
};

// Maximization model whose optimum equals soft_weight_total minus the
// optimal MaxSAT cost (excluding cost_offset). Throws kEmptyHardClause.
IlpModel BuildIlp(const WcnfInstance& instance);

// Purely syntactic; only `cls` changes. A row already tagged kSoftLink keeps
// the tag while it still has the link shape, and kLogicalAnd is never
// recomputed; neither is kOpaque.
LinConstraint ClassifyConstraint(LinConstraint constraint);

// Activity of a row under a 0/1 point indexed by model variable.
std::int64_t Activity(const LinConstraint& c, const std::vector<std::uint8_t>& x);
bool IsSatisfied(const LinConstraint& c, const std::vector<std::uint8_t>& x);
bool IsFeasible(const IlpModel& model, const std::vector<std::uint8_t>& x);
std::int64_t ObjectiveValue(const IlpModel& model, const std::vector<std::uint8_t>& x);

// CPLEX LP text, for cross-checking against external ILP tools.
std::string WriteLp(const IlpModel& model);

}  // namespace ilpsimp

#endif  // ILPSIMP_ILP_MODEL_H_
