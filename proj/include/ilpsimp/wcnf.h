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

#ifndef ILPSIMP_WCNF_H_
#define ILPSIMP_WCNF_H_

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ilpsimp {

using Weight = std::int64_t;

// Adds two non-negative weights, throwing ErrorCode::kOverflow instead of
// wrapping.
Weight CheckedAdd(Weight a, Weight b);

// A literal over a 1-based variable index.
class Lit {
 public:
  constexpr Lit() = default;
  constexpr Lit(int var, bool negated) : var_(var), negated_(negated) {}

  // DIMACS integer form: 3 -> x3, -3 -> not x3.
  static constexpr Lit FromDimacs(int value) {
    return Lit(value < 0 ? -value : value, value < 0);
  }

  constexpr int var() const { return var_; }
  constexpr bool negated() const { return negated_; }
  constexpr int ToDimacs() const { return negated_ ? -var_ : var_; }

  constexpr Lit operator~() const { return Lit(var_, !negated_); }
  constexpr Lit operator^(bool flip) const { return Lit(var_, negated_ != flip); }

  friend constexpr bool operator==(Lit a, Lit b) = default;
  friend constexpr auto operator<=>(Lit a, Lit b) {
    if (a.var_ != b.var_) return a.var_ <=> b.var_;
    return a.negated_ <=> b.negated_;
  }

 private:
  int var_ = 0;
  bool negated_ = false;
};

using Clause = std::vector<Lit>;

// True iff the clause contains some variable in both polarities.
bool IsTautology(const Clause& clause);

struct SoftClause {
  Clause lits;
  Weight weight = 1;

  friend bool operator==(const SoftClause&, const SoftClause&) = default;
};

struct WcnfInstance {
  int num_vars = 0;
  std::vector<Clause> hard;
  std::vector<SoftClause> soft;
  // Cost already committed by an upstream transformation.
  Weight cost_offset = 0;

  bool HasEmptyHardClause() const;
  // Sum of soft weights; throws kOverflow past 2^63-1.
  Weight SoftWeightTotal() const;

  friend bool operator==(const WcnfInstance&, const WcnfInstance&) = default;
};

// Total truth assignment over variables 1..size().
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(int num_vars) : values_(num_vars, 0) {}

  int size() const { return static_cast<int>(values_.size()); }
  bool value(int var) const { return values_[var - 1] != 0; }
  bool value(Lit lit) const { return value(lit.var()) != lit.negated(); }
  void set(int var, bool v) { values_[var - 1] = v ? 1 : 0; }
  void resize(int num_vars) { values_.resize(num_vars, 0); }

  friend bool operator==(const Assignment&, const Assignment&) = default;

 private:
  std::vector<std::uint8_t> values_;
};

enum class Dialect { kLegacy, kMse22 };

WcnfInstance ParseWcnf(std::string_view text);
WcnfInstance ReadWcnfFile(const std::string& path);

std::string WriteWcnf(const WcnfInstance& instance, Dialect dialect);
void WriteWcnfFile(const WcnfInstance& instance, Dialect dialect,
                   const std::string& path);

enum class SolverStatus { kOptimum, kSatisfiable, kUnsat, kUnknown };

struct SolverOutput {
  SolverStatus status = SolverStatus::kUnknown;
  std::optional<Weight> cost;
  std::optional<Assignment> assignment;
};

// Parses MSE-style `s`/`o`/`v` solver output. `expected_vars` sizes the
// returned assignment; a binary `v` string shorter than it is an error.
// Unsatisfiable status is an outcome, not an error.
SolverOutput ParseSolverOutput(std::string_view text, int expected_vars);

// Renders `s`, `o` and a binary-string `v` line.
std::string FormatSolverOutput(SolverStatus status, std::optional<Weight> cost,
                               const Assignment* assignment);

struct Evaluation {
  bool feasible = false;
  Weight cost = 0;                      // valid when feasible
  std::vector<std::size_t> violated;    // hard clause indices
};

// Cost = cost_offset + weight of falsified soft clauses, defined only when all
// hard clauses hold.
Evaluation Evaluate(const WcnfInstance& instance, const Assignment& assignment);

}  // namespace ilpsimp

#endif  // ILPSIMP_WCNF_H_
