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

#ifndef ILPSIMP_RECONSTRUCT_H_
#define ILPSIMP_RECONSTRUCT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ilpsimp/encode.h"
#include "ilpsimp/presolve.h"
#include "ilpsimp/wcnf.h"

namespace ilpsimp {

inline constexpr int kRecordVersion = 1;

// How one original WCNF variable is recovered from a simplified solution.
struct VarRecovery {
  enum class Kind { kFixed, kLiteral, kExpression };
  struct ExprTerm {
    std::int64_t coef = 0;
    Lit lit;
    friend bool operator==(const ExprTerm&, const ExprTerm&) = default;
  };

  Kind kind = Kind::kFixed;
  int value = 0;  // kFixed
  Lit lit;        // kLiteral
  std::int64_t c0 = 0;
  std::vector<ExprTerm> terms;  // kExpression: c0 + sum(coef * val(lit))

  friend bool operator==(const VarRecovery&, const VarRecovery&) = default;
};

struct ReconstructionRecord {
  int version = kRecordVersion;
  int origin_num_vars = 0;
  int simp_num_vars = 0;
  Weight cost_offset = 0;
  std::vector<VarRecovery> vars;  // index x-1 for original variable x

  friend bool operator==(const ReconstructionRecord&, const ReconstructionRecord&) = default;
};

// Derives the record from presolve output and its encoding. The model must
// have been built from an instance with `origin_num_vars` variables.
ReconstructionRecord MakeRecord(const SimplifiedModel& simp, const EncodedModel& encoded,
                                int origin_num_vars);

std::string RecordToJson(const ReconstructionRecord& record);
// Throws kMalformedLine on schema errors or an unknown version.
ReconstructionRecord RecordFromJson(const std::string& text);

// Lifts an assignment of the simplified instance. Throws kLengthMismatch when
// simp_sol is shorter than the simplified instance and kRangeError when an
// expression leaves {0, 1}.
Assignment Reconstruct(const Assignment& simp_sol, const ReconstructionRecord& record);

enum class VerdictFailure { kHardViolation, kCostMismatch, kNotOptimal };

struct Verdict {
  std::vector<VerdictFailure> failures;
  std::optional<Weight> cost;         // evaluated cost when feasible
  std::optional<Weight> oracle_cost;  // when the oracle ran and found one
  bool oracle_checked = false;

  bool ok() const { return failures.empty(); }
};

struct VerifyConfig {
  int oracle_var_limit = 20;
};

Verdict VerifyOptimal(const WcnfInstance& origin, const Assignment& origin_sol, Weight claimed_cost,
                      const VerifyConfig& config = {});

}  // namespace ilpsimp

#endif  // ILPSIMP_RECONSTRUCT_H_
