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

#include "ilpsimp/oracle.h"

#include <limits>
#include <string>
#include <vector>

#include "ilpsimp/error.h"

namespace ilpsimp {

namespace {

// Bit (n - var) of the enumeration counter holds var, so counting upward
// walks assignments in lexicographic order.
struct MaskClause {
  std::uint32_t pos = 0;
  std::uint32_t neg = 0;
  Weight weight = 0;
};

MaskClause ToMask(const Clause& clause, int n, Weight weight) {
  MaskClause m;
  m.weight = weight;
  for (Lit l : clause) {
    const std::uint32_t bit = 1u << (n - l.var());
    (l.negated() ? m.neg : m.pos) |= bit;
  }
  return m;
}

bool Holds(const MaskClause& c, std::uint32_t a) { return ((a & c.pos) | (~a & c.neg)) != 0; }

}  // namespace

OracleResult BruteForce(const WcnfInstance& instance) {
  const int n = instance.num_vars;
  if (n > kBruteForceMaxVars) {
    throw Error(ErrorCode::kTooLarge,
                "brute force limited to " + std::to_string(kBruteForceMaxVars) + " variables");
  }
  std::vector<MaskClause> hard;
  std::vector<MaskClause> soft;
  for (const Clause& c : instance.hard) hard.push_back(ToMask(c, n, 0));
  for (const SoftClause& c : instance.soft) soft.push_back(ToMask(c.lits, n, c.weight));
  instance.SoftWeightTotal();  // overflow guard

  OracleResult result;
  bool found = false;
  Weight best = 0;
  std::uint32_t best_a = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t i = 0; i < count; ++i) {
    const auto a = static_cast<std::uint32_t>(i);
    bool ok = true;
    for (const MaskClause& c : hard) {
      if (!Holds(c, a)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    Weight cost = 0;
    for (const MaskClause& c : soft) {
      if (!Holds(c, a)) cost += c.weight;
    }
    if (!found || cost < best) {
      found = true;
      best = cost;
      best_a = a;
      if (cost == 0) break;
    }
  }
  if (!found) return result;
  result.status = OracleStatus::kOptimum;
  result.cost = CheckedAdd(best, instance.cost_offset);
  result.witness = Assignment(n);
  for (int v = 1; v <= n; ++v) result.witness.set(v, (best_a >> (n - v)) & 1u);
  return result;
}

namespace {

class Search {
 public:
  Search(const WcnfInstance& inst, std::int64_t budget)
      : inst_(inst), budget_(budget), value_(inst.num_vars + 1, -1),
        soft_dead_(inst.soft.size(), 0) {
    const int n = inst.num_vars;
    hard_occ_.resize(2 * (n + 1));
    soft_occ_.resize(2 * (n + 1));
    for (std::size_t i = 0; i < inst.hard.size(); ++i) {
      for (Lit l : inst.hard[i]) AddOcc(hard_occ_[Index(l)], i);
    }
    for (std::size_t i = 0; i < inst.soft.size(); ++i) {
      for (Lit l : inst.soft[i].lits) AddOcc(soft_occ_[Index(l)], i);
    }
  }

  // Returns false when the budget ran out.
  bool Run() {
    for (std::size_t i = 0; i < inst_.hard.size(); ++i) {
      if (inst_.hard[i].empty()) return true;
    }
    for (const SoftClause& c : inst_.soft) {
      if (c.lits.empty()) base_ += c.weight;
    }
    // Root units.
    std::vector<Lit> units;
    for (const Clause& c : inst_.hard) {
      if (c.size() == 1) units.push_back(c[0]);
    }
    Weight lb = base_;
    const Mark mark = Save();
    bool ok = true;
    for (Lit u : units) {
      if (!Assign(u, &lb)) {
        ok = false;
        break;
      }
    }
    if (ok) Dfs(lb);
    Undo(mark);
    return !out_of_budget_;
  }

  bool found() const { return found_; }
  Weight best() const { return best_; }
  const std::vector<std::int8_t>& best_values() const { return best_values_; }
  std::int64_t nodes() const { return nodes_; }

 private:
  // Duplicate literals in one clause must not register it twice.
  static void AddOcc(std::vector<std::size_t>& occ, std::size_t i) {
    if (occ.empty() || occ.back() != i) occ.push_back(i);
  }

  static std::size_t Index(Lit l) { return 2 * static_cast<std::size_t>(l.var()) + l.negated(); }

  int LitValue(Lit l) const {
    const int v = value_[l.var()];
    if (v < 0) return -1;
    return v != static_cast<int>(l.negated()) ? 1 : 0;
  }

  // Assigns l true and propagates; false on hard conflict. Adds newly
  // falsified soft weight to *lb.
  bool Assign(Lit l, Weight* lb) {
    if (LitValue(l) == 1) return true;
    if (LitValue(l) == 0) return false;
    std::vector<Lit> queue{l};
    value_[l.var()] = l.negated() ? 0 : 1;
    trail_.push_back(l.var());
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Lit falsified = ~queue[q];
      for (std::size_t ci : soft_occ_[Index(falsified)]) {
        bool all_false = true;
        for (Lit x : inst_.soft[ci].lits) {
          if (LitValue(x) != 0) {
            all_false = false;
            break;
          }
        }
        if (all_false && !soft_dead_[ci]) {
          soft_dead_[ci] = 1;
          dead_trail_.push_back(ci);
          *lb += inst_.soft[ci].weight;
        }
      }
      for (std::size_t ci : hard_occ_[Index(falsified)]) {
        int open = 0;
        Lit last;
        bool sat = false;
        for (Lit x : inst_.hard[ci]) {
          const int v = LitValue(x);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v < 0) {
            ++open;
            last = x;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          value_[last.var()] = last.negated() ? 0 : 1;
          trail_.push_back(last.var());
          queue.push_back(last);
        }
      }
    }
    return true;
  }

  struct Mark {
    std::size_t values;
    std::size_t dead;
  };

  Mark Save() const { return {trail_.size(), dead_trail_.size()}; }

  void Undo(Mark mark) {
    while (trail_.size() > mark.values) {
      value_[trail_.back()] = -1;
      trail_.pop_back();
    }
    while (dead_trail_.size() > mark.dead) {
      soft_dead_[dead_trail_.back()] = 0;
      dead_trail_.pop_back();
    }
  }

  void Dfs(Weight lb) {
    if (out_of_budget_) return;
    if (found_ && lb >= best_) return;
    int var = 0;
    for (int v = 1; v <= inst_.num_vars; ++v) {
      if (value_[v] < 0) {
        var = v;
        break;
      }
    }
    if (var == 0) {
      found_ = true;
      best_ = lb;
      best_values_ = value_;
      return;
    }
    if (++nodes_ > budget_) {
      out_of_budget_ = true;
      return;
    }
    for (bool negated : {true, false}) {
      const Mark mark = Save();
      Weight child = lb;
      if (Assign(Lit(var, negated), &child)) Dfs(child);
      Undo(mark);
      if (out_of_budget_) return;
    }
  }

  const WcnfInstance& inst_;
  std::int64_t budget_;
  std::vector<std::int8_t> value_;
  std::vector<int> trail_;
  // Soft clauses already charged to the bound; a clause can look falsified
  // from several queue entries of one propagation.
  std::vector<char> soft_dead_;
  std::vector<std::size_t> dead_trail_;
  std::vector<std::vector<std::size_t>> hard_occ_;
  std::vector<std::vector<std::size_t>> soft_occ_;
  Weight base_ = 0;
  bool found_ = false;
  bool out_of_budget_ = false;
  Weight best_ = 0;
  std::vector<std::int8_t> best_values_;
  std::int64_t nodes_ = 0;
};

}  // namespace

std::variant<OracleResult, BudgetExceeded> BranchAndBound(const WcnfInstance& instance,
                                                          std::int64_t node_budget) {
  instance.SoftWeightTotal();
  Search search(instance, node_budget);
  if (!search.Run()) return BudgetExceeded{search.nodes()};
  OracleResult result;
  if (!search.found()) return result;
  result.status = OracleStatus::kOptimum;
  result.cost = CheckedAdd(search.best(), instance.cost_offset);
  result.witness = Assignment(instance.num_vars);
  for (int v = 1; v <= instance.num_vars; ++v) result.witness.set(v, search.best_values()[v] == 1);
  return result;
}

}  // namespace ilpsimp
