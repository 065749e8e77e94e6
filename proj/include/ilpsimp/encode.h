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

#ifndef ILPSIMP_ENCODE_H_
#define ILPSIMP_ENCODE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "ilpsimp/ilp_model.h"
#include "ilpsimp/presolve.h"
#include "ilpsimp/wcnf.h"

namespace ilpsimp {

enum class AmoMethod { kPairwise, kSequential };
enum class PbMethod { kAuto, kCardinality, kBdd, kAdder };

struct EncodeConfig {
  // Above this size at-most-one switches from pairwise to sequential.
  int pairwise_amo_max = 6;
  std::int64_t bdd_node_limit = 100000;
};

AmoMethod DefaultAmoMethod(std::size_t n, const EncodeConfig& config);

// Accumulates the clauses of one output instance. Variables are handed out
// contiguously from 1.
class EncodeSession {
 public:
  struct PendingEquality {
    Lit lit;  // literal of the multi-aggregated variable
    std::int64_t c0 = 0;
    std::vector<Term> terms;  // over original model variables
  };

  int NewVar() { return ++num_vars_; }
  Lit NewLit() { return Lit(NewVar(), false); }
  void AddHard(Clause clause) { hard_.push_back(std::move(clause)); }
  void AddSoft(Clause clause, Weight weight) {
    soft_.push_back({std::move(clause), weight});
  }

  int num_vars() const { return num_vars_; }
  const std::vector<Clause>& hard() const { return hard_; }
  const std::vector<SoftClause>& soft() const { return soft_; }

  WcnfInstance ToInstance() const;

  // Per original model variable: the literal standing for it, if any.
  std::vector<std::optional<Lit>> literal_of;
  std::vector<PendingEquality> pending;
  Weight cost_offset = 0;

 private:
  int num_vars_ = 0;
  std::vector<Clause> hard_;
  std::vector<SoftClause> soft_;
};

struct PbTerm {
  std::int64_t coef = 0;
  Lit lit;
};

// Logical OR: the clause itself. Throws kEmptyConstraint for n = 0.
void EncodeOr(EncodeSession& session, std::span<const Lit> lits);

// y <-> AND(xs).
void EncodeAnd(EncodeSession& session, Lit y, std::span<const Lit> xs);

// At most one of `lits`; nothing for n <= 1.
void EncodeAmo(EncodeSession& session, std::span<const Lit> lits, AmoMethod method);

// Exactly one of `lits`.
void EncodeExactlyOne(EncodeSession& session, std::span<const Lit> lits, AmoMethod method);

// lhs <= sum(coef * lit) <= rhs, sides encoded independently over shared
// inputs (kNegInf/kPosInf for an absent side). With kAuto: unit coefficients
// use a totalizer, others a BDD if it stays under the node limit, else an
// adder network. Throws kTriviallyFalse when a side cannot be met.
void EncodePb(EncodeSession& session, std::vector<PbTerm> terms, std::int64_t lhs,
              std::int64_t rhs, const EncodeConfig& config, PbMethod method = PbMethod::kAuto);

// Variable mapping: Fixed -> no literal; Free -> fresh variable; simple
// aggregation -> (negated) literal of the final variable of its chain;
// multi-aggregated decision variable -> fresh variable plus a queued
// pseudo-Boolean equality.
EncodeSession EncodeVariables(const SimplifiedModel& simp);

// One soft unit per objective term: (lit, w) for w > 0, (~lit, -w) for w < 0.
// Sets session.cost_offset so both instances share absolute optimal cost.
void EncodeObjective(const SimplifiedModel& simp, EncodeSession& session);

struct EncodedModel {
  WcnfInstance instance;
  std::vector<std::optional<Lit>> literal_of;  // by original model variable
};

struct Unencodable {
  ConstraintClass cls;
  std::size_t row;
};

std::variant<EncodedModel, Unencodable> EncodeModel(const SimplifiedModel& simp,
                                                    const EncodeConfig& config);

}  // namespace ilpsimp

#endif  // ILPSIMP_ENCODE_H_
