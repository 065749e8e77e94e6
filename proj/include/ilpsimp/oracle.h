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

#ifndef ILPSIMP_ORACLE_H_
#define ILPSIMP_ORACLE_H_

#include <cstdint>
#include <variant>

#include "ilpsimp/wcnf.h"

namespace ilpsimp {

enum class OracleStatus { kOptimum, kUnsat };

struct OracleResult {
  OracleStatus status = OracleStatus::kUnsat;
  Weight cost = 0;  // includes cost_offset
  Assignment witness;
};

inline constexpr int kBruteForceMaxVars = 26;

// Exhaustive enumeration. Among minimizers the witness is lexicographically
// smallest reading x1 first. Throws kTooLarge beyond kBruteForceMaxVars.
OracleResult BruteForce(const WcnfInstance& instance);

struct BudgetExceeded {
  std::int64_t nodes = 0;
};

// DPLL with unit propagation over hard clauses, bounded by the weight of
// soft clauses already falsified. `node_budget` counts branching decisions.
std::variant<OracleResult, BudgetExceeded> BranchAndBound(const WcnfInstance& instance,
                                                          std::int64_t node_budget);

}  // namespace ilpsimp

#endif  // ILPSIMP_ORACLE_H_
