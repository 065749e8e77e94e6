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

#include "ilpsimp/presolve.h"

#include <algorithm>
#include <chrono>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

#include "ilpsimp/error.h"

namespace ilpsimp {

namespace {

using i128 = __int128;

std::int64_t Narrow(i128 v) {
  // The extreme values double as the infinity sentinels.
  if (v <= static_cast<i128>(kNegInf) || v >= static_cast<i128>(kPosInf)) {
    throw Error(ErrorCode::kOverflow, "presolve coefficient exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

LinConstraint Negated(const LinConstraint& c) {
  LinConstraint out;
  out.terms = c.terms;
  for (Term& t : out.terms) t.coef = -t.coef;
  out.lhs = c.has_rhs() ? -c.rhs : kNegInf;
  out.rhs = c.has_lhs() ? -c.lhs : kPosInf;
  out.cls = ConstraintClass::kGeneralLinear;
  return out;
}

// Picks the orientation under which the row lands in a named class.
LinConstraint Orient(LinConstraint c) {
  LinConstraint classified = ClassifyConstraint(c);
  if (classified.cls != ConstraintClass::kGeneralLinear) return classified;
  LinConstraint flipped = ClassifyConstraint(Negated(c));
  if (flipped.cls != ConstraintClass::kGeneralLinear) return flipped;
  return classified;
}

}  // namespace

double PresolveReport::FixedVarsRate() const {
  return decision_vars == 0 ? 0.0 : static_cast<double>(fixed_decision_vars) / decision_vars;
}

double PresolveReport::AggrVarsRate() const {
  return decision_vars == 0
             ? 0.0
             : static_cast<double>(simple_aggr_decision_vars + multi_aggr_decision_vars) /
                   decision_vars;
}

double PresolveReport::SimpleAggrRatio() const {
  const int total = simple_aggr_decision_vars + multi_aggr_decision_vars;
  return total == 0 ? 1.0 : static_cast<double>(simple_aggr_decision_vars) / total;
}

// ---------------------------------------------------------------------------
// Canonicalize

std::variant<VarMap, Infeasible> Canonicalize(std::vector<VarDisposition> dispositions) {
  const int n = static_cast<int>(dispositions.size());
  std::vector<int> parent(n);
  std::vector<char> parity(n, 0);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v, bool* p) {
    bool acc = false;
    int r = v;
    while (parent[r] != r) {
      acc ^= parity[r] != 0;
      r = parent[r];
    }
    int cur = v;
    bool pc = acc;
    while (parent[cur] != cur) {
      int next = parent[cur];
      bool pn = pc ^ (parity[cur] != 0);
      parent[cur] = r;
      parity[cur] = pc;
      cur = next;
      pc = pn;
    }
    *p = acc;
    return r;
  };

  for (int v = 0; v < n; ++v) {
    const VarDisposition& d = dispositions[v];
    if (d.kind != DispositionKind::kSimpleAggregated) continue;
    if (d.target < 0 || d.target >= n) {
      throw Error(ErrorCode::kInvalidArgument, "aggregation target out of range");
    }
    bool pa, pb;
    int ra = find(v, &pa);
    int rb = find(d.target, &pb);
    bool rel = pa ^ pb ^ d.negated;
    if (ra == rb) {
      if (rel) {
        return Infeasible{"variable " + std::to_string(v) + " aggregated onto its own negation"};
      }
      continue;
    }
    if (ra < rb) {
      parent[rb] = ra;
      parity[rb] = rel;
    } else {
      parent[ra] = rb;
      parity[ra] = rel;
    }
  }

  // Per class: fixed value, defining multi-aggregation, or Free terminal.
  std::vector<int> class_fixed(n, -1);
  std::vector<int> class_multi(n, -1);
  std::vector<int> class_terminal(n, -1);
  for (int v = 0; v < n; ++v) {
    bool p;
    int r = find(v, &p);
    const VarDisposition& d = dispositions[v];
    switch (d.kind) {
      case DispositionKind::kFixed: {
        if (d.value != 0 && d.value != 1) {
          throw Error(ErrorCode::kInvalidArgument, "fixed value outside {0,1}");
        }
        int root_value = d.value ^ static_cast<int>(p);
        if (class_fixed[r] >= 0 && class_fixed[r] != root_value) {
          return Infeasible{"aggregation class fixed to both values"};
        }
        class_fixed[r] = root_value;
        break;
      }
      case DispositionKind::kMultiAggregated:
        if (class_multi[r] >= 0) {
          throw Error(ErrorCode::kInvalidArgument,
                      "two multi-aggregated variables in one aggregation class");
        }
        class_multi[r] = v;
        break;
      case DispositionKind::kFree:
        class_terminal[r] = v;
        break;
      case DispositionKind::kSimpleAggregated:
        break;
    }
  }
  auto representative = [&](int r) {
    return class_terminal[r] >= 0 ? class_terminal[r] : r;  // r is the lowest index
  };

  struct Expr {
    i128 constant = 0;
    std::map<int, i128> terms;
  };
  std::vector<Expr> memo(n);
  std::vector<char> state(n, 0);

  // Expression of a class root over Free representatives.
  std::vector<Expr> root_memo(n);
  std::vector<char> root_state(n, 0);
  std::function<Expr(int)> expand_root;
  auto expand_var = [&](int v) {
    bool p;
    int r = find(v, &p);
    Expr e = expand_root(r);
    if (p) {
      e.constant = 1 - e.constant;
      for (auto& [u, c] : e.terms) c = -c;
    }
    return e;
  };
  expand_root = [&](int r) -> Expr {
    if (root_state[r] == 2) return root_memo[r];
    if (root_state[r] == 1) {
      throw Error(ErrorCode::kInvalidArgument, "cyclic multi-aggregation");
    }
    root_state[r] = 1;
    Expr e;
    if (class_fixed[r] >= 0) {
      e.constant = class_fixed[r];
    } else if (class_multi[r] >= 0) {
      const int m = class_multi[r];
      const VarDisposition& d = dispositions[m];
      Expr em;
      em.constant = d.c0;
      for (const Term& t : d.terms) {
        if (t.var < 0 || t.var >= n) {
          throw Error(ErrorCode::kInvalidArgument, "multi-aggregation term out of range");
        }
        Expr sub = expand_var(t.var);
        em.constant += static_cast<i128>(t.coef) * sub.constant;
        for (auto [u, c] : sub.terms) em.terms[u] += static_cast<i128>(t.coef) * c;
      }
      std::erase_if(em.terms, [](const auto& kv) { return kv.second == 0; });
      bool pm;
      find(m, &pm);
      if (pm) {
        em.constant = 1 - em.constant;
        for (auto& [u, c] : em.terms) c = -c;
      }
      e = std::move(em);
    } else {
      const int rep = representative(r);
      bool prep;
      find(rep, &prep);
      if (prep) {
        e.constant = 1;
        e.terms[rep] = -1;
      } else {
        e.terms[rep] = 1;
      }
    }
    root_state[r] = 2;
    root_memo[r] = e;
    return e;
  };

  VarMap out;
  out.dispositions.resize(n);
  out.new_index_of.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    bool p;
    int r = find(v, &p);
    VarDisposition& d = out.dispositions[v];
    if (class_fixed[r] >= 0) {
      d = VarDisposition::Fixed(class_fixed[r] ^ static_cast<int>(p));
      continue;
    }
    if (class_multi[r] < 0) {
      const int rep = representative(r);
      if (v == rep) {
        d = VarDisposition::Free();
      } else {
        bool prep;
        find(rep, &prep);
        d = VarDisposition::Simple(rep, p ^ prep);
      }
      continue;
    }
    Expr e = expand_var(v);
    if (e.terms.empty()) {
      if (e.constant != 0 && e.constant != 1) {
        return Infeasible{"multi-aggregation evaluates outside {0,1}"};
      }
      d = VarDisposition::Fixed(static_cast<int>(e.constant));
    } else if (e.terms.size() == 1 && e.constant == 0 && e.terms.begin()->second == 1) {
      d = VarDisposition::Simple(e.terms.begin()->first, false);
    } else if (e.terms.size() == 1 && e.constant == 1 && e.terms.begin()->second == -1) {
      d = VarDisposition::Simple(e.terms.begin()->first, true);
    } else {
      std::vector<Term> terms;
      for (auto [u, c] : e.terms) terms.push_back({Narrow(c), u});
      d = VarDisposition::Multi(Narrow(e.constant), std::move(terms));
    }
  }
  for (int v = 0; v < n; ++v) {
    if (out.dispositions[v].kind == DispositionKind::kFree) {
      out.new_index_of[v] = out.free_count++;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presolver

Presolver::Presolver(IlpModel model, PresolveConfig config)
    : model_(std::move(model)), config_(config) {
  const int n = model_.num_vars();
  rows_ = model_.constraints;
  for (const LinConstraint& c : rows_) {
    if (c.cls == ConstraintClass::kLogicalAnd || c.cls == ConstraintClass::kOpaque) {
      throw Error(ErrorCode::kInvalidArgument, "presolve accepts linear rows only");
    }
  }
  alive_.assign(rows_.size(), 1);
  lo_.resize(n);
  hi_.resize(n);
  for (int v = 0; v < n; ++v) {
    lo_[v] = static_cast<std::int8_t>(model_.vars[v].lower);
    hi_[v] = static_cast<std::int8_t>(model_.vars[v].upper);
    if (lo_[v] > hi_[v]) MarkInfeasible("empty variable domain");
    if (model_.vars[v].kind == VarKind::kDecision) ++report_.decision_vars;
  }
  parent_.resize(n);
  std::iota(parent_.begin(), parent_.end(), 0);
  parity_.assign(n, 0);
  multi_.assign(n, 0);
  multi_expr_.resize(n);
  obj_.assign(n, 0);
  for (const Term& t : model_.objective.terms) obj_[t.var] += t.coef;
  obj_offset_ = model_.objective.offset;
  probed_.assign(n, 0);
}

std::int64_t Presolver::objective_offset() const { return Narrow(obj_offset_); }

bool Presolver::MarkInfeasible(const std::string& why) {
  if (!infeasible_) {
    infeasible_ = true;
    infeasible_reason_ = why;
  }
  return false;
}

void Presolver::Kill(std::size_t r) {
  if (!alive_[r]) return;
  alive_[r] = 0;
  ++report_.removed_constraints;
  ++changes_;
  occurs_valid_ = false;
}

bool Presolver::is_fixed(int var) const {
  bool p;
  int r = const_cast<Presolver*>(this)->Find(var, &p);
  return lo_[r] == hi_[r] && !multi_[r];
}

int Presolver::fixed_value(int var) const {
  bool p;
  int r = const_cast<Presolver*>(this)->Find(var, &p);
  return lo_[r] ^ static_cast<int>(p);
}

std::vector<LinConstraint> Presolver::rows() const {
  std::vector<LinConstraint> out;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (alive_[r]) out.push_back(rows_[r]);
  }
  return out;
}

int Presolver::Find(int v, bool* par) {
  bool acc = false;
  int r = v;
  while (parent_[r] != r) {
    acc ^= parity_[r] != 0;
    r = parent_[r];
  }
  int cur = v;
  bool pc = acc;
  while (parent_[cur] != cur) {
    int next = parent_[cur];
    bool pn = pc ^ (parity_[cur] != 0);
    parent_[cur] = r;
    parity_[cur] = pc;
    cur = next;
    pc = pn;
  }
  *par = acc;
  return r;
}

bool Presolver::Fix(int v, int value) {
  bool p;
  int r = Find(v, &p);
  const int root_value = value ^ static_cast<int>(p);
  if (multi_[r]) {
    // Pin the defining expression instead of the (eliminated) variable.
    const Affine& e = multi_expr_[r];
    LinConstraint row;
    for (auto [c, u] : e.terms) row.terms.push_back({Narrow(c), u});
    row.lhs = row.rhs = Narrow(root_value - e.constant);
    rows_.push_back(std::move(row));
    alive_.push_back(1);
    occurs_valid_ = false;
    ++changes_;
    return true;
  }
  if (lo_[r] == hi_[r]) {
    if (lo_[r] != root_value) return MarkInfeasible("variable fixed to both values");
    return true;
  }
  lo_[r] = hi_[r] = static_cast<std::int8_t>(root_value);
  ++changes_;
  return true;
}

bool Presolver::Union(int a, int b, bool negated) {
  bool pa, pb;
  int ra = Find(a, &pa);
  int rb = Find(b, &pb);
  const bool rel = pa ^ pb ^ negated;  // ra = rb xor rel
  if (ra == rb) {
    if (rel) return MarkInfeasible("variable equal to its own negation");
    return true;
  }
  if (multi_[ra] || multi_[rb]) return true;  // implied anyway; keep the model as is
  const bool fa = lo_[ra] == hi_[ra];
  const bool fb = lo_[rb] == hi_[rb];
  if (fa && fb) {
    if (lo_[ra] != (lo_[rb] ^ static_cast<int>(rel))) {
      return MarkInfeasible("aggregation contradicts fixings");
    }
    return true;
  }
  if (fa) return Fix(rb, lo_[ra] ^ static_cast<int>(rel));
  if (fb) return Fix(ra, lo_[rb] ^ static_cast<int>(rel));
  if (ra < rb) {
    parent_[rb] = ra;
    parity_[rb] = rel;
  } else {
    parent_[ra] = rb;
    parity_[ra] = rel;
  }
  ++changes_;
  ++report_.aggregated_vars;
  occurs_valid_ = false;
  return true;
}

Presolver::Affine Presolver::Resolve(int v) {
  bool p;
  int r = Find(v, &p);
  Affine e;
  if (multi_[r]) {
    const Affine def = multi_expr_[r];
    e.constant = def.constant;
    for (auto [c, u] : def.terms) {
      Affine sub = Resolve(u);
      e.constant += c * sub.constant;
      for (auto [a, w] : sub.terms) e.terms.push_back({c * a, w});
    }
  } else if (lo_[r] == hi_[r]) {
    e.constant = lo_[r];
  } else {
    e.terms.push_back({1, r});
  }
  if (p) {
    e.constant = 1 - e.constant;
    for (auto& [c, u] : e.terms) c = -c;
  }
  return e;
}

bool Presolver::RewriteRow(std::size_t r) {
  if (!alive_[r]) return true;
  LinConstraint& row = rows_[r];
  bool clean = std::is_sorted(row.terms.begin(), row.terms.end(),
                              [](const Term& a, const Term& b) { return a.var < b.var; });
  for (const Term& t : row.terms) {
    if (parent_[t.var] != t.var || multi_[t.var] || lo_[t.var] == hi_[t.var]) {
      clean = false;
      break;
    }
  }
  if (!clean) {
    std::map<int, i128> acc;
    i128 constant = 0;
    for (const Term& t : row.terms) {
      Affine e = Resolve(t.var);
      constant += t.coef * e.constant;
      for (auto [a, u] : e.terms) acc[u] += t.coef * a;
    }
    std::vector<Term> terms;
    for (auto [u, c] : acc) {
      if (c != 0) terms.push_back({Narrow(c), u});
    }
    if (terms != row.terms) occurs_valid_ = false;
    row.terms = std::move(terms);
    if (row.has_lhs()) row.lhs = Narrow(row.lhs - constant);
    if (row.has_rhs()) row.rhs = Narrow(row.rhs - constant);
  }
  if (row.terms.empty()) {
    if ((row.has_lhs() && row.lhs > 0) || (row.has_rhs() && row.rhs < 0)) {
      return MarkInfeasible("row reduced to a false constant");
    }
    Kill(r);
  }
  return true;
}

void Presolver::RewriteObjective() {
  const int n = model_.num_vars();
  std::vector<i128> next(n, 0);
  for (int v = 0; v < n; ++v) {
    if (obj_[v] == 0) continue;
    if (parent_[v] == v && !multi_[v] && lo_[v] != hi_[v]) {
      next[v] += obj_[v];
      continue;
    }
    Affine e = Resolve(v);
    obj_offset_ += obj_[v] * e.constant;
    for (auto [a, u] : e.terms) next[u] += obj_[v] * a;
  }
  obj_ = std::move(next);
}

bool Presolver::Substitute() {
  if (infeasible_) return false;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!RewriteRow(r)) return false;
  }
  RewriteObjective();
  return true;
}

void Presolver::BuildOccurrences() {
  occurs_.assign(model_.num_vars(), {});
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!alive_[r]) continue;
    for (const Term& t : rows_[r].terms) occurs_[t.var].push_back(r);
  }
  in_queue_.assign(rows_.size(), 0);
  occurs_valid_ = true;
}

void Presolver::EnsureOccurrences() {
  Substitute();
  if (!occurs_valid_ || in_queue_.size() != rows_.size()) BuildOccurrences();
}

void Presolver::ActivityBounds(const LinConstraint& c, i128* min_act, i128* max_act) const {
  i128 lo = 0, hi = 0;
  for (const Term& t : c.terms) {
    const i128 a = t.coef;
    if (a > 0) {
      lo += a * lo_[t.var];
      hi += a * hi_[t.var];
    } else {
      lo += a * hi_[t.var];
      hi += a * lo_[t.var];
    }
  }
  *min_act = lo;
  *max_act = hi;
}

bool Presolver::PropagateRows(std::vector<std::size_t> worklist, std::vector<int>* trail) {
  std::deque<std::size_t> queue;
  for (std::size_t r : worklist) {
    if (alive_[r] && !in_queue_[r]) {
      in_queue_[r] = 1;
      queue.push_back(r);
    }
  }
  bool ok = true;
  while (!queue.empty()) {
    const std::size_t r = queue.front();
    queue.pop_front();
    in_queue_[r] = 0;
    if (!ok || !alive_[r]) continue;
    const LinConstraint& row = rows_[r];
    i128 min_act, max_act;
    ActivityBounds(row, &min_act, &max_act);
    if ((row.has_lhs() && max_act < row.lhs) || (row.has_rhs() && min_act > row.rhs)) {
      ok = false;
      continue;
    }
    for (const Term& t : row.terms) {
      if (lo_[t.var] == hi_[t.var]) continue;
      const i128 a = t.coef;
      const i128 lo_t = a < 0 ? a : 0;
      const i128 hi_t = a > 0 ? a : 0;
      bool possible[2];
      for (int val = 0; val < 2; ++val) {
        const i128 new_min = min_act - lo_t + a * val;
        const i128 new_max = max_act - hi_t + a * val;
        possible[val] = !((row.has_rhs() && new_min > row.rhs) ||
                          (row.has_lhs() && new_max < row.lhs));
      }
      if (!possible[0] && !possible[1]) {
        ok = false;
        break;
      }
      if (possible[0] && possible[1]) continue;
      const int val = possible[1] ? 1 : 0;
      lo_[t.var] = hi_[t.var] = static_cast<std::int8_t>(val);
      if (trail != nullptr) trail->push_back(t.var);
      min_act = min_act - lo_t + a * val;
      max_act = max_act - hi_t + a * val;
      for (std::size_t q : occurs_[t.var]) {
        if (q != r && alive_[q] && !in_queue_[q]) {
          in_queue_[q] = 1;
          queue.push_back(q);
        }
      }
    }
  }
  return ok;
}

bool Presolver::PropagateBounds() {
  if (infeasible_) return false;
  EnsureOccurrences();
  if (infeasible_) return false;
  std::vector<int> trail;
  std::vector<std::size_t> all;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (alive_[r]) all.push_back(r);
  }
  if (!PropagateRows(std::move(all), &trail)) {
    return MarkInfeasible("bound propagation proved a row unsatisfiable");
  }
  report_.fixed_vars += static_cast<int>(trail.size());
  changes_ += static_cast<long long>(trail.size());
  return true;
}

bool Presolver::RemoveRedundant() {
  if (infeasible_) return false;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!alive_[r]) continue;
    LinConstraint& row = rows_[r];
    i128 min_act, max_act;
    ActivityBounds(row, &min_act, &max_act);
    if ((row.has_lhs() && max_act < row.lhs) || (row.has_rhs() && min_act > row.rhs)) {
      return MarkInfeasible("row activity outside its bounds");
    }
    const bool lhs_implied = !row.has_lhs() || min_act >= row.lhs;
    const bool rhs_implied = !row.has_rhs() || max_act <= row.rhs;
    if (lhs_implied && rhs_implied) {
      Kill(r);
      continue;
    }
    if (row.has_lhs() && lhs_implied) {
      row.lhs = kNegInf;
      ++changes_;
    }
    if (row.has_rhs() && rhs_implied) {
      row.rhs = kPosInf;
      ++changes_;
    }
  }
  return true;
}

bool Presolver::Deduplicate() {
  if (infeasible_) return false;
  struct Key {
    std::vector<Term> terms;
    bool operator<(const Key& o) const {
      return std::lexicographical_compare(
          terms.begin(), terms.end(), o.terms.begin(), o.terms.end(),
          [](const Term& a, const Term& b) {
            return a.var != b.var ? a.var < b.var : a.coef < b.coef;
          });
    }
  };
  std::map<Key, std::size_t> seen;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!alive_[r]) continue;
    if (!RewriteRow(r)) return false;
    if (!alive_[r]) continue;
    const LinConstraint& row = rows_[r];
    const bool flip = row.terms.front().coef < 0;
    const LinConstraint canon = flip ? Negated(row) : row;
    auto [it, inserted] = seen.emplace(Key{canon.terms}, r);
    if (inserted) continue;
    LinConstraint& keep = rows_[it->second];
    const bool keep_flip = keep.terms.front().coef < 0;
    const LinConstraint keep_canon = keep_flip ? Negated(keep) : keep;
    std::int64_t lhs = std::max(keep_canon.lhs, canon.lhs);
    std::int64_t rhs = std::min(keep_canon.rhs, canon.rhs);
    if (lhs != kNegInf && rhs != kPosInf && lhs > rhs) {
      return MarkInfeasible("parallel rows with disjoint ranges");
    }
    if (keep_flip) {
      keep.lhs = rhs == kPosInf ? kNegInf : -rhs;
      keep.rhs = lhs == kNegInf ? kPosInf : -lhs;
    } else {
      keep.lhs = lhs;
      keep.rhs = rhs;
    }
    Kill(r);
  }
  return true;
}

bool Presolver::DetectAggregations() {
  if (infeasible_) return false;
  const std::size_t limit = rows_.size();
  for (std::size_t r = 0; r < limit; ++r) {
    if (!alive_[r] || !rows_[r].is_equality()) continue;
    if (!RewriteRow(r)) return false;
    if (!alive_[r]) continue;
    const std::vector<Term> terms = rows_[r].terms;
    const std::int64_t k = rows_[r].rhs;
    const auto unit = [](const Term& t) { return t.coef == 1 || t.coef == -1; };

    if (terms.size() == 2 && unit(terms[0]) && unit(terms[1])) {
      // a*yi + b*yj = k  =>  yj = b*k - a*b*yi
      const std::int64_t a = terms[0].coef;
      const std::int64_t b = terms[1].coef;
      const std::int64_t c0 = b * k;
      const std::int64_t c1 = -a * b;
      bool negated;
      if (c0 == 0 && c1 == 1) {
        negated = false;
      } else if (c0 == 1 && c1 == -1) {
        negated = true;
      } else {
        continue;  // forces a fixing; bound propagation owns it
      }
      if (!Union(terms[1].var, terms[0].var, negated)) return false;
      Kill(r);
      continue;
    }

    if (!config_.multi_aggregation || terms.size() < 2) continue;
    const bool partitioning =
        k == 1 && std::all_of(terms.begin(), terms.end(),
                              [](const Term& t) { return t.coef == 1; });
    if (partitioning) continue;
    int pivot = -1;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (unit(terms[i])) pivot = static_cast<int>(i);
    }
    if (pivot < 0) continue;
    const std::int64_t ap = terms[pivot].coef;
    Affine def;
    def.constant = static_cast<i128>(ap) * k;
    i128 min_val = def.constant, max_val = def.constant;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (static_cast<int>(i) == pivot) continue;
      const i128 c = -static_cast<i128>(ap) * terms[i].coef;
      def.terms.push_back({c, terms[i].var});
      (c > 0 ? max_val : min_val) += c;
    }
    const int y = terms[pivot].var;
    if (min_val < 0 || max_val > 1) {
      // Keep the eliminated variable inside {0,1}: 0 <= c0 + sum <= 1.
      LinConstraint bound;
      for (auto [c, u] : def.terms) bound.terms.push_back({Narrow(c), u});
      if (min_val < 0) bound.lhs = Narrow(-def.constant);
      if (max_val > 1) bound.rhs = Narrow(1 - def.constant);
      rows_.push_back(std::move(bound));
      alive_.push_back(1);
    }
    multi_[y] = 1;
    multi_expr_[y] = std::move(def);
    ++report_.aggregated_vars;
    ++changes_;
    occurs_valid_ = false;
    Kill(r);
  }
  return true;
}

bool Presolver::DualSingletons() {
  if (infeasible_) return false;
  EnsureOccurrences();
  if (infeasible_) return false;
  const int n = model_.num_vars();
  std::vector<char> touched(n, 0);
  for (int v = 0; v < n; ++v) {
    if (parent_[v] != v || multi_[v] || lo_[v] == hi_[v] || touched[v]) continue;
    if (obj_[v] == 0) continue;
    const int preferred = obj_[v] > 0 ? 1 : 0;
    std::vector<std::size_t> live;
    for (std::size_t r : occurs_[v]) {
      if (alive_[r]) live.push_back(r);
    }
    if (live.empty()) {
      if (!Fix(v, preferred)) return false;
      touched[v] = 1;
      continue;
    }
    if (live.size() != 1) continue;
    const LinConstraint& row = rows_[live[0]];
    if (row.terms.size() != 2) continue;
    const Term& tv = row.terms[0].var == v ? row.terms[0] : row.terms[1];
    const Term& tu = row.terms[0].var == v ? row.terms[1] : row.terms[0];
    const int u = tu.var;
    if (parent_[u] != u || multi_[u] || lo_[u] == hi_[u] || touched[u]) continue;
    auto feasible = [&](int x, int y) {
      const std::int64_t act = tv.coef * x + tu.coef * y;
      return (!row.has_lhs() || act >= row.lhs) && (!row.has_rhs() || act <= row.rhs);
    };
    int best[2];
    bool ok = true;
    for (int y = 0; y < 2; ++y) {
      if (feasible(preferred, y)) {
        best[y] = preferred;
      } else if (feasible(1 - preferred, y)) {
        best[y] = 1 - preferred;
      } else {
        ok = false;
      }
    }
    if (!ok) continue;
    if (best[0] == best[1]) {
      if (!Fix(v, best[0])) return false;
    } else {
      if (!Union(v, u, best[0] == 1)) return false;
      touched[u] = 1;
    }
    touched[v] = 1;
  }
  return true;
}

ProbeResult Presolver::ProbeImpl(int v) {
  ProbeResult result;
  if (lo_[v] == hi_[v] || parent_[v] != v || multi_[v]) return result;
  std::vector<std::pair<int, int>> implied[2];
  bool ok[2];
  for (int val = 0; val < 2; ++val) {
    std::vector<int> trail;
    lo_[v] = hi_[v] = static_cast<std::int8_t>(val);
    ok[val] = PropagateRows(occurs_[v], &trail);
    for (int w : trail) implied[val].push_back({w, lo_[w]});
    for (int w : trail) {
      lo_[w] = 0;
      hi_[w] = 1;
    }
    lo_[v] = 0;
    hi_[v] = 1;
    std::sort(implied[val].begin(), implied[val].end());
  }
  if (!ok[0] && !ok[1]) {
    result.infeasible = true;
    return result;
  }
  if (!ok[0] || !ok[1]) {
    const int forced = ok[0] ? 0 : 1;
    result.fixings.push_back({v, forced});
    result.fixings.insert(result.fixings.end(), implied[forced].begin(),
                          implied[forced].end());
    std::sort(result.fixings.begin(), result.fixings.end());
    return result;
  }
  std::size_t i = 0, j = 0;
  while (i < implied[0].size() && j < implied[1].size()) {
    auto [w0, a0] = implied[0][i];
    auto [w1, a1] = implied[1][j];
    if (w0 < w1) {
      ++i;
    } else if (w1 < w0) {
      ++j;
    } else {
      if (a0 == a1) {
        result.fixings.push_back({w0, a0});
      } else {
        // w = v when (v=0 -> w=0, v=1 -> w=1), else w = 1 - v.
        const bool negated = a0 == 1;
        result.aggregations.push_back({std::max(v, w0), std::min(v, w0), negated});
      }
      ++i;
      ++j;
    }
  }
  return result;
}

ProbeResult Presolver::ProbeVariable(int var) {
  ProbeResult empty;
  if (infeasible_) {
    empty.infeasible = true;
    return empty;
  }
  EnsureOccurrences();
  bool p;
  int r = Find(var, &p);
  if (r != var) return empty;
  return ProbeImpl(var);
}

bool Presolver::ProbeAll() {
  if (infeasible_) return false;
  EnsureOccurrences();
  if (infeasible_) return false;
  std::vector<ProbeResult> results;
  const int n = model_.num_vars();
  for (int v = 0; v < n && report_.probes < config_.probe_limit; ++v) {
    if (probed_[v] || parent_[v] != v || multi_[v] || lo_[v] == hi_[v]) continue;
    if (occurs_[v].empty()) continue;
    probed_[v] = 1;
    ++report_.probes;
    ProbeResult res = ProbeImpl(v);
    if (res.infeasible) return MarkInfeasible("probing refuted both values");
    if (!res.empty()) results.push_back(std::move(res));
  }
  // Every result is implied by the same snapshot, so applying them in
  // ascending probe order is sound.
  for (const ProbeResult& res : results) {
    for (auto [w, val] : res.fixings) {
      if (!Fix(w, val)) return false;
    }
  }
  for (const ProbeResult& res : results) {
    for (const auto& agg : res.aggregations) {
      if (!Union(agg.var, agg.onto, agg.negated)) return false;
    }
  }
  return true;
}

bool Presolver::RunRound(bool* changed) {
  const long long before = changes_;
  bool ok = Substitute() && PropagateBounds() && Substitute() && RemoveRedundant() &&
            Deduplicate() && DetectAggregations() &&
            (!config_.dual_singletons || DualSingletons()) && Substitute() &&
            (!config_.probing || ProbeAll()) && Substitute() && RemoveRedundant();
  ++report_.rounds_executed;
  *changed = changes_ != before;
  return ok && !infeasible_;
}

std::vector<VarDisposition> Presolver::RawDispositions() {
  const int n = model_.num_vars();
  std::vector<VarDisposition> out(n);
  for (int v = 0; v < n; ++v) {
    bool p;
    int r = Find(v, &p);
    if (r != v) {
      out[v] = VarDisposition::Simple(r, p);
    } else if (multi_[v]) {
      std::vector<Term> terms;
      for (auto [c, u] : multi_expr_[v].terms) terms.push_back({Narrow(c), u});
      out[v] = VarDisposition::Multi(Narrow(multi_expr_[v].constant), std::move(terms));
    } else if (lo_[v] == hi_[v]) {
      out[v] = VarDisposition::Fixed(lo_[v]);
    }
  }
  return out;
}

PresolveResult Presolver::Finish() {
  if (infeasible_ || !Substitute()) return Infeasible{infeasible_reason_};
  auto canon = Canonicalize(RawDispositions());
  if (auto* inf = std::get_if<Infeasible>(&canon)) return *inf;
  SimplifiedModel out;
  out.var_map = std::move(std::get<VarMap>(canon));
  const VarMap& map = out.var_map;

  IlpModel& m = out.model;
  m.vars.resize(map.free_count);
  for (int v = 0; v < model_.num_vars(); ++v) {
    if (map.new_index_of[v] >= 0) {
      m.vars[map.new_index_of[v]] = model_.vars[v];
      m.vars[map.new_index_of[v]].lower = 0;
      m.vars[map.new_index_of[v]].upper = 1;
    }
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (!alive_[r]) continue;
    LinConstraint row = rows_[r];
    for (Term& t : row.terms) {
      const int idx = map.new_index_of[t.var];
      if (idx < 0) {
        throw Error(ErrorCode::kInvalidArgument, "presolve left an eliminated variable in a row");
      }
      t.var = idx;
    }
    if (row.cls == ConstraintClass::kSoftLink) {
      LinConstraint kept = ClassifyConstraint(row);
      if (kept.cls == ConstraintClass::kSoftLink) {
        m.constraints.push_back(std::move(kept));
        continue;
      }
    }
    row.cls = ConstraintClass::kGeneralLinear;
    m.constraints.push_back(Orient(std::move(row)));
  }
  for (int v = 0; v < model_.num_vars(); ++v) {
    if (obj_[v] == 0) continue;
    m.objective.terms.push_back({Narrow(obj_[v]), map.new_index_of[v]});
  }
  out.original_vars = model_.vars;
  m.soft_weight_total = model_.soft_weight_total;
  m.base_cost_offset = model_.base_cost_offset;
  out.objective_offset_delta = Narrow(obj_offset_);
  m.objective.offset = out.objective_offset_delta;

  PresolveReport& rep = report_;
  rep.fixed_decision_vars = rep.simple_aggr_decision_vars = rep.multi_aggr_decision_vars = 0;
  rep.fixed_vars = rep.aggregated_vars = 0;
  for (int v = 0; v < model_.num_vars(); ++v) {
    const DispositionKind kind = map.dispositions[v].kind;
    const bool decision = model_.vars[v].kind == VarKind::kDecision;
    if (kind == DispositionKind::kFixed) {
      ++rep.fixed_vars;
      if (decision) ++rep.fixed_decision_vars;
    } else if (kind == DispositionKind::kSimpleAggregated) {
      ++rep.aggregated_vars;
      if (decision) ++rep.simple_aggr_decision_vars;
    } else if (kind == DispositionKind::kMultiAggregated) {
      ++rep.aggregated_vars;
      if (decision) ++rep.multi_aggr_decision_vars;
    }
  }
  out.report = rep;
  return out;
}

PresolveResult Presolve(const IlpModel& model, const PresolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Presolver presolver(model, config);
  for (int round = 0; round < config.max_rounds && !presolver.infeasible(); ++round) {
    bool changed = false;
    if (!presolver.RunRound(&changed) || !changed) break;
  }
  PresolveResult result = presolver.Finish();
  if (auto* simp = std::get_if<SimplifiedModel>(&result)) {
    simp->report.preprocessing_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return result;
}

}  // namespace ilpsimp
