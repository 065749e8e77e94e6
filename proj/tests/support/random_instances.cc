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

#include "support/random_instances.h"

#include <algorithm>
#include <variant>

#include "ilpsimp/oracle.h"

namespace ilpsimp::testing {

namespace {

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Clause RandomClause(std::mt19937_64& rng, int n, int max_len) {
  const int len = Uniform(rng, 1, std::min(max_len, std::max(1, n)));
  Clause c;
  for (int i = 0; i < len; ++i) c.push_back(Lit(Uniform(rng, 1, n), Uniform(rng, 0, 1) == 1));
  return c;
}

}  // namespace

WcnfInstance RandomInstance(std::mt19937_64& rng, const InstanceShape& shape) {
  WcnfInstance inst;
  inst.num_vars = Uniform(rng, shape.min_vars, shape.max_vars);
  if (inst.num_vars == 0) return inst;
  const int clauses = Uniform(rng, 1, shape.max_clauses);
  std::bernoulli_distribution hard(shape.hard_fraction);
  for (int i = 0; i < clauses; ++i) {
    Clause c = RandomClause(rng, inst.num_vars, shape.max_clause_len);
    if (hard(rng)) {
      inst.hard.push_back(std::move(c));
    } else {
      const Weight w = shape.weighted ? Uniform(rng, 1, static_cast<int>(shape.max_weight)) : 1;
      inst.soft.push_back({std::move(c), w});
    }
  }
  return inst;
}

IlpModel RandomModel(std::mt19937_64& rng, int max_vars, int extra_rows) {
  InstanceShape shape;
  shape.max_vars = max_vars;
  shape.max_clauses = max_vars + 2;
  shape.max_clause_len = 3;
  WcnfInstance inst = RandomInstance(rng, shape);
  inst.hard.erase(std::remove_if(inst.hard.begin(), inst.hard.end(),
                                 [](const Clause& c) { return c.empty(); }),
                  inst.hard.end());
  IlpModel model = BuildIlp(inst);
  const int n = inst.num_vars;
  for (int r = 0; r < extra_rows; ++r) {
    LinConstraint row;
    const int len = Uniform(rng, 2, std::min(4, std::max(2, n)));
    std::vector<int> vars;
    for (int i = 0; i < len; ++i) vars.push_back(Uniform(rng, 0, n - 1));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::int64_t min_act = 0;
    std::int64_t max_act = 0;
    for (int v : vars) {
      int coef = 0;
      while (coef == 0) coef = Uniform(rng, -3, 3);
      row.terms.push_back({coef, v});
      (coef > 0 ? max_act : min_act) += coef;
    }
    switch (Uniform(rng, 0, 2)) {
      case 0:
        row.lhs = Uniform(rng, static_cast<int>(min_act), static_cast<int>(max_act));
        break;
      case 1:
        row.rhs = Uniform(rng, static_cast<int>(min_act), static_cast<int>(max_act));
        break;
      default: {
        const int v = Uniform(rng, static_cast<int>(min_act), static_cast<int>(max_act));
        row.lhs = v;
        row.rhs = v;
      }
    }
    model.constraints.push_back(ClassifyConstraint(std::move(row)));
  }
  return model;
}

std::optional<std::int64_t> BruteForceIlp(const IlpModel& model) {
  const int n = model.num_vars();
  std::optional<std::int64_t> best;
  std::vector<std::uint8_t> x(n, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool in_bounds = true;
    for (int v = 0; v < n; ++v) {
      x[v] = (mask >> v) & 1u;
      if (x[v] < model.vars[v].lower || x[v] > model.vars[v].upper) in_bounds = false;
    }
    if (!in_bounds || !IsFeasible(model, x)) continue;
    const std::int64_t value = ObjectiveValue(model, x);
    if (!best || value > *best) best = value;
  }
  return best;
}

std::vector<bool> ExtendableInputs(const std::vector<Clause>& clauses, int num_vars, int n) {
  std::vector<bool> out(std::size_t{1} << n);
  WcnfInstance inst;
  inst.num_vars = num_vars;
  inst.hard = clauses;
  for (int v = 1; v <= n; ++v) inst.hard.push_back({});
  for (std::uint64_t mask = 0; mask < out.size(); ++mask) {
    for (int v = 1; v <= n; ++v) {
      inst.hard[clauses.size() + v - 1] = {Lit(v, ((mask >> (v - 1)) & 1u) == 0)};
    }
    auto r = BranchAndBound(inst, std::int64_t{1} << 40);
    out[mask] = std::get<OracleResult>(r).status == OracleStatus::kOptimum;
  }
  return out;
}

Assignment FromMask(std::uint64_t mask, int n) {
  Assignment a(n);
  for (int v = 1; v <= n; ++v) a.set(v, (mask >> (v - 1)) & 1u);
  return a;
}

}  // namespace ilpsimp::testing
