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

#include "ilpsimp/ilp_model.h"

#include <algorithm>
#include <map>

#include "ilpsimp/error.h"

namespace ilpsimp {

std::string_view ConstraintClassName(ConstraintClass cls) {
  switch (cls) {
    case ConstraintClass::kLogicalOr: return "LogicalOr";
    case ConstraintClass::kSoftLink: return "SoftLink";
    case ConstraintClass::kSetppcPacking: return "SetppcPacking";
    case ConstraintClass::kSetppcPartitioning: return "SetppcPartitioning";
    case ConstraintClass::kLogicalAnd: return "LogicalAnd";
    case ConstraintClass::kGeneralLinear: return "GeneralLinear";
    case ConstraintClass::kOpaque: return "Opaque";
  }
  return "Unknown";
}

namespace {

// Builds sum(+-y) from a clause: positive literal -> +y, negative -> -y with
// the constant 1 returned separately. Repeated and complementary literals
// are merged.
std::vector<Term> ClauseTerms(const Clause& clause, int* negatives) {
  std::map<int, std::int64_t> coefs;
  *negatives = 0;
  Clause lits = clause;
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (Lit l : lits) {
    if (l.negated()) {
      coefs[l.var() - 1] -= 1;
      ++*negatives;
    } else {
      coefs[l.var() - 1] += 1;
    }
  }
  std::vector<Term> terms;
  for (auto [var, coef] : coefs) {
    if (coef != 0) terms.push_back({coef, var});
  }
  return terms;
}

}  // namespace

IlpModel BuildIlp(const WcnfInstance& instance) {
  if (instance.HasEmptyHardClause()) {
    throw Error(ErrorCode::kEmptyHardClause, "instance contains an empty hard clause");
  }
  IlpModel model;
  model.soft_weight_total = instance.SoftWeightTotal();
  model.base_cost_offset = instance.cost_offset;
  model.vars.reserve(instance.num_vars + instance.soft.size());
  for (int x = 1; x <= instance.num_vars; ++x) {
    model.vars.push_back({0, 1, VarKind::kDecision, x});
  }
  for (std::size_t i = 0; i < instance.soft.size(); ++i) {
    model.vars.push_back({0, 1, VarKind::kIndicator, static_cast<int>(i)});
  }

  // sum_{H+} y + sum_{H-} (1 - y) >= 1
  for (const Clause& clause : instance.hard) {
    int negatives = 0;
    LinConstraint row;
    row.terms = ClauseTerms(clause, &negatives);
    row.lhs = 1 - negatives;
    model.constraints.push_back(ClassifyConstraint(std::move(row)));
  }

  // z <= sum_{S+} y + sum_{S-} (1 - y)
  for (std::size_t i = 0; i < instance.soft.size(); ++i) {
    const int z = instance.num_vars + static_cast<int>(i);
    int negatives = 0;
    LinConstraint row;
    row.terms = ClauseTerms(instance.soft[i].lits, &negatives);
    for (Term& t : row.terms) t.coef = -t.coef;
    row.terms.push_back({1, z});
    row.rhs = negatives;
    row.cls = ConstraintClass::kSoftLink;
    model.constraints.push_back(ClassifyConstraint(std::move(row)));
    model.objective.terms.push_back({instance.soft[i].weight, z});
  }
  return model;
}

LinConstraint ClassifyConstraint(LinConstraint c) {
  if (c.cls == ConstraintClass::kLogicalAnd || c.cls == ConstraintClass::kOpaque) return c;
  const bool unit = !c.terms.empty() &&
                    std::all_of(c.terms.begin(), c.terms.end(),
                                [](const Term& t) { return t.coef == 1 || t.coef == -1; });
  const auto positives = std::count_if(c.terms.begin(), c.terms.end(),
                                       [](const Term& t) { return t.coef > 0; });
  const auto negatives = static_cast<std::int64_t>(c.terms.size()) - positives;
  const bool all_plus = unit && negatives == 0;

  if (c.cls == ConstraintClass::kSoftLink && unit && !c.has_lhs() && c.has_rhs() &&
      positives >= 1 && c.rhs == positives - 1) {
    return c;
  }
  if (all_plus && !c.has_lhs() && c.rhs == 1) {
    c.cls = ConstraintClass::kSetppcPacking;
  } else if (all_plus && c.lhs == 1 && c.rhs == 1) {
    c.cls = ConstraintClass::kSetppcPartitioning;
  } else if (unit && !c.has_rhs() && c.has_lhs() && c.lhs + negatives == 1) {
    c.cls = ConstraintClass::kLogicalOr;
  } else {
    c.cls = ConstraintClass::kGeneralLinear;
  }
  return c;
}

std::int64_t Activity(const LinConstraint& c, const std::vector<std::uint8_t>& x) {
  std::int64_t sum = 0;
  for (const Term& t : c.terms) {
    if (x[t.var]) sum += t.coef;
  }
  return sum;
}

bool IsSatisfied(const LinConstraint& c, const std::vector<std::uint8_t>& x) {
  if (c.cls == ConstraintClass::kLogicalAnd) {
    bool product = true;
    for (std::size_t i = 1; i < c.terms.size(); ++i) product = product && x[c.terms[i].var];
    return (x[c.terms[0].var] != 0) == product;
  }
  const std::int64_t a = Activity(c, x);
  return (!c.has_lhs() || a >= c.lhs) && (!c.has_rhs() || a <= c.rhs);
}

bool IsFeasible(const IlpModel& model, const std::vector<std::uint8_t>& x) {
  for (int v = 0; v < model.num_vars(); ++v) {
    if (x[v] < model.vars[v].lower || x[v] > model.vars[v].upper) return false;
  }
  return std::all_of(model.constraints.begin(), model.constraints.end(),
                     [&](const LinConstraint& c) { return IsSatisfied(c, x); });
}

std::int64_t ObjectiveValue(const IlpModel& model, const std::vector<std::uint8_t>& x) {
  std::int64_t value = model.objective.offset;
  for (const Term& t : model.objective.terms) {
    if (x[t.var]) value += t.coef;
  }
  return value;
}

namespace {

std::string VarName(const IlpModel& model, int v) {
  const IlpVar& var = model.vars[v];
  switch (var.kind) {
    case VarKind::kDecision: return "y" + std::to_string(var.origin);
    case VarKind::kIndicator: return "z" + std::to_string(var.origin);
    case VarKind::kAuxiliary: break;
  }
  return "a" + std::to_string(v);
}

void AppendExpr(std::string& out, const IlpModel& model, const std::vector<Term>& terms) {
  if (terms.empty()) {
    out += " 0";
    return;
  }
  bool first = true;
  for (const Term& t : terms) {
    if (t.coef < 0) {
      out += " - ";
    } else if (!first) {
      out += " + ";
    } else {
      out += ' ';
    }
    std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (mag != 1) out += std::to_string(mag) + " ";
    out += VarName(model, t.var);
    first = false;
  }
}

}  // namespace

std::string WriteLp(const IlpModel& model) {
  std::string out = "\\ objective offset " + std::to_string(model.objective.offset) + "\n";
  out += "Maximize\n obj:";
  AppendExpr(out, model, model.objective.terms);
  out += "\nSubject To\n";
  for (std::size_t i = 0; i < model.constraints.size(); ++i) {
    const LinConstraint& c = model.constraints[i];
    if (c.cls == ConstraintClass::kLogicalAnd) {
      out += "\\ c" + std::to_string(i) + ": " + VarName(model, c.terms[0].var) + " = AND(";
      for (std::size_t k = 1; k < c.terms.size(); ++k) {
        if (k > 1) out += ", ";
        out += VarName(model, c.terms[k].var);
      }
      out += ")\n";
      continue;
    }
    out += " c" + std::to_string(i) + ":";
    if (c.is_equality()) {
      AppendExpr(out, model, c.terms);
      out += " = " + std::to_string(c.rhs);
    } else if (c.has_lhs() && c.has_rhs()) {
      out += " " + std::to_string(c.lhs) + " <=";
      AppendExpr(out, model, c.terms);
      out += " <= " + std::to_string(c.rhs);
    } else if (c.has_lhs()) {
      AppendExpr(out, model, c.terms);
      out += " >= " + std::to_string(c.lhs);
    } else if (c.has_rhs()) {
      AppendExpr(out, model, c.terms);
      out += " <= " + std::to_string(c.rhs);
    } else {
      AppendExpr(out, model, c.terms);
      out += " >= -inf";
    }
    out += "\n";
  }
  out += "Bounds\n";
  for (int v = 0; v < model.num_vars(); ++v) {
    out += " " + std::to_string(model.vars[v].lower) + " <= " + VarName(model, v) +
           " <= " + std::to_string(model.vars[v].upper) + "\n";
  }
  out += "Binary\n";
  for (int v = 0; v < model.num_vars(); ++v) out += " " + VarName(model, v) + "\n";
  out += "End\n";
  return out;
}

}  // namespace ilpsimp
