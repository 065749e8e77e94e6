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

#include "ilpsimp/encode.h"

#include <algorithm>
#include <deque>
#include <map>

#include "ilpsimp/error.h"

namespace ilpsimp {

namespace {

using i128 = __int128;

// sum(coef * lit) >= bound with every coef > 0.
struct GeqConstraint {
  std::vector<PbTerm> terms;
  i128 bound = 0;
};

GeqConstraint Normalize(const std::vector<PbTerm>& in, i128 bound) {
  // Collect coefficients on positive literals, folding constants.
  std::map<int, i128> coef_of;
  for (const PbTerm& t : in) {
    if (t.coef == 0) continue;
    if (t.lit.negated()) {
      bound -= t.coef;  // a * ~x = a - a * x
      coef_of[t.lit.var()] -= t.coef;
    } else {
      coef_of[t.lit.var()] += t.coef;
    }
  }
  GeqConstraint out;
  for (auto [var, c] : coef_of) {
    if (c > 0) {
      out.terms.push_back({static_cast<std::int64_t>(c), Lit(var, false)});
    } else if (c < 0) {
      bound -= c;  // c * x = c + |c| * ~x
      out.terms.push_back({static_cast<std::int64_t>(-c), Lit(var, true)});
    }
  }
  out.bound = bound;
  return out;
}

std::vector<Lit> Totalize(EncodeSession& s, std::span<const Lit> lits, std::size_t k) {
  if (lits.size() == 1) return {lits[0]};
  const std::size_t half = lits.size() / 2;
  std::vector<Lit> a = Totalize(s, lits.subspan(0, half), k);
  std::vector<Lit> b = Totalize(s, lits.subspan(half), k);
  const std::size_t m = std::min(a.size() + b.size(), k);
  std::vector<Lit> r;
  for (std::size_t i = 0; i < m; ++i) r.push_back(s.NewLit());
  // r_{i+j+1} -> a_{i+1} or b_{j+1}
  for (std::size_t i = 0; i <= a.size(); ++i) {
    for (std::size_t j = 0; j <= b.size(); ++j) {
      const std::size_t out = i + j + 1;
      if (out > m) continue;
      Clause c{~r[out - 1]};
      if (i < a.size()) c.push_back(a[i]);
      if (j < b.size()) c.push_back(b[j]);
      s.AddHard(std::move(c));
    }
  }
  return r;
}

// At least k of lits, 1 <= k <= n.
void EncodeAtLeast(EncodeSession& s, std::span<const Lit> lits, std::size_t k) {
  if (k == 1) {
    s.AddHard(Clause(lits.begin(), lits.end()));
    return;
  }
  std::vector<Lit> out = Totalize(s, lits, k);
  s.AddHard({out[k - 1]});
}

class BddBuilder {
 public:
  static constexpr int kTrue = -1;
  static constexpr int kFalse = -2;

  BddBuilder(const std::vector<PbTerm>& terms, std::int64_t limit)
      : terms_(terms), limit_(limit) {
    suffix_.assign(terms.size() + 1, 0);
    for (std::size_t i = terms.size(); i-- > 0;) suffix_[i] = suffix_[i + 1] + terms[i].coef;
  }

  // Returns false when the node limit is exceeded.
  bool Build(i128 bound, int* root) {
    try {
      *root = Node(0, bound);
    } catch (const LimitExceeded&) {
      return false;
    }
    return true;
  }

  void Emit(EncodeSession& s, int root) const {
    if (root == kTrue) return;
    if (root == kFalse) {
      s.AddHard({});
      return;
    }
    std::vector<Lit> var_of(nodes_.size());
    for (std::size_t n = 0; n < nodes_.size(); ++n) var_of[n] = s.NewLit();
    auto lit_of = [&](int id) { return var_of[id]; };
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
      const NodeData& d = nodes_[n];
      const Lit x = var_of[n];
      const Lit sel = terms_[d.level].lit;
      // x -> hi (hi is implied by lo, the function is monotone)
      if (d.hi == kFalse) {
        s.AddHard({~x});
      } else if (d.hi != kTrue) {
        s.AddHard({~x, lit_of(d.hi)});
      }
      // x and not sel -> lo
      if (d.lo == kFalse) {
        s.AddHard({~x, sel});
      } else if (d.lo != kTrue) {
        s.AddHard({~x, sel, lit_of(d.lo)});
      }
    }
    s.AddHard({var_of[root]});
  }

  std::size_t size() const { return nodes_.size(); }

 private:
  struct LimitExceeded {};
  struct NodeData {
    std::size_t level;
    int hi;
    int lo;
  };

  int Node(std::size_t level, i128 bound) {
    if (bound <= 0) return kTrue;
    if (suffix_[level] < bound) return kFalse;
    auto key = std::make_pair(level, bound);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int hi = Node(level + 1, bound - terms_[level].coef);
    const int lo = Node(level + 1, bound);
    int id;
    if (hi == lo) {
      id = hi;
    } else {
      if (static_cast<std::int64_t>(nodes_.size()) >= limit_) throw LimitExceeded{};
      id = static_cast<int>(nodes_.size());
      nodes_.push_back({level, hi, lo});
    }
    memo_.emplace(key, id);
    return id;
  }

  const std::vector<PbTerm>& terms_;
  std::int64_t limit_;
  std::vector<i128> suffix_;
  std::map<std::pair<std::size_t, i128>, int> memo_;
  std::vector<NodeData> nodes_;
};

// Full Tseitin definitions, so auxiliaries are functions of the inputs.
Lit XorGate(EncodeSession& s, std::span<const Lit> in) {
  const Lit out = s.NewLit();
  const std::size_t n = in.size();
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Clause c;
    bool parity = false;
    for (std::size_t i = 0; i < n; ++i) {
      const bool v = (mask >> i) & 1u;
      parity ^= v;
      c.push_back(v ? ~in[i] : in[i]);
    }
    c.push_back(parity ? out : ~out);
    s.AddHard(std::move(c));
  }
  return out;
}

Lit MajorityGate(EncodeSession& s, Lit x, Lit y, Lit z) {
  const Lit c = s.NewLit();
  s.AddHard({~x, ~y, c});
  s.AddHard({~x, ~z, c});
  s.AddHard({~y, ~z, c});
  s.AddHard({x, y, ~c});
  s.AddHard({x, z, ~c});
  s.AddHard({y, z, ~c});
  return c;
}

Lit AndGate(EncodeSession& s, Lit x, Lit y) {
  const Lit c = s.NewLit();
  s.AddHard({~x, ~y, c});
  s.AddHard({x, ~c});
  s.AddHard({y, ~c});
  return c;
}

void EncodeAdder(EncodeSession& s, const std::vector<PbTerm>& terms, i128 bound) {
  std::vector<std::deque<Lit>> buckets;
  for (const PbTerm& t : terms) {
    for (int bit = 0; bit < 63; ++bit) {
      if ((t.coef >> bit) & 1) {
        if (buckets.size() <= static_cast<std::size_t>(bit)) buckets.resize(bit + 1);
        buckets[bit].push_back(t.lit);
      }
    }
  }
  std::vector<std::optional<Lit>> sum_bits;
  for (std::size_t bit = 0; bit < buckets.size(); ++bit) {
    auto& q = buckets[bit];
    auto carry_to = [&](Lit c) {
      if (buckets.size() <= bit + 1) buckets.resize(bit + 2);
      buckets[bit + 1].push_back(c);
    };
    while (q.size() >= 3) {
      const Lit x = q.front(); q.pop_front();
      const Lit y = q.front(); q.pop_front();
      const Lit z = q.front(); q.pop_front();
      const Lit in[] = {x, y, z};
      q.push_back(XorGate(s, in));
      carry_to(MajorityGate(s, x, y, z));
    }
    if (q.size() == 2) {
      const Lit in[] = {q[0], q[1]};
      const Lit sum = XorGate(s, in);
      carry_to(AndGate(s, q[0], q[1]));
      sum_bits.push_back(sum);
    } else if (q.size() == 1) {
      sum_bits.push_back(q[0]);
    } else {
      sum_bits.push_back(std::nullopt);
    }
  }
  // sum >= bound: forbid every first-difference position where the sum
  // drops below the bound's bit pattern.
  const std::size_t m = sum_bits.size();
  for (std::size_t j = 0; j < m; ++j) {
    if (((bound >> j) & 1) == 0) continue;
    Clause c;
    bool satisfied = false;
    if (sum_bits[j]) c.push_back(*sum_bits[j]);
    for (std::size_t i = j + 1; i < m && !satisfied; ++i) {
      const bool bit = (bound >> i) & 1;
      if (!sum_bits[i]) {
        if (bit) satisfied = true;  // ~false is true
        continue;
      }
      c.push_back(bit ? ~*sum_bits[i] : *sum_bits[i]);
    }
    if (!satisfied) s.AddHard(std::move(c));
  }
}

void EncodeGeq(EncodeSession& s, GeqConstraint g, const EncodeConfig& config,
               PbMethod method) {
  i128 total = 0;
  for (const PbTerm& t : g.terms) total += t.coef;
  if (g.bound <= 0) return;
  if (total < g.bound) throw Error(ErrorCode::kTriviallyFalse, "pseudo-Boolean side unreachable");

  // Saturate and pull out literals every solution needs.
  bool changed = true;
  while (changed && g.bound > 0) {
    changed = false;
    total = 0;
    for (PbTerm& t : g.terms) {
      if (t.coef > g.bound) t.coef = static_cast<std::int64_t>(g.bound);
      total += t.coef;
    }
    for (std::size_t i = 0; i < g.terms.size(); ++i) {
      if (total - g.terms[i].coef < g.bound) {
        s.AddHard({g.terms[i].lit});
        g.bound -= g.terms[i].coef;
        g.terms.erase(g.terms.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  if (g.bound <= 0) return;

  std::stable_sort(g.terms.begin(), g.terms.end(),
                   [](const PbTerm& a, const PbTerm& b) { return a.coef > b.coef; });
  const bool uniform = std::all_of(g.terms.begin(), g.terms.end(), [&](const PbTerm& t) {
    return t.coef == g.terms.front().coef;
  });
  if (method == PbMethod::kAuto) method = uniform ? PbMethod::kCardinality : PbMethod::kBdd;

  switch (method) {
    case PbMethod::kCardinality: {
      if (!uniform) {
        throw Error(ErrorCode::kInvalidArgument, "cardinality encoding needs equal coefficients");
      }
      const i128 a = g.terms.front().coef;
      const auto k = static_cast<std::size_t>((g.bound + a - 1) / a);
      std::vector<Lit> lits;
      for (const PbTerm& t : g.terms) lits.push_back(t.lit);
      EncodeAtLeast(s, lits, k);
      return;
    }
    case PbMethod::kBdd: {
      BddBuilder bdd(g.terms, config.bdd_node_limit);
      int root;
      if (bdd.Build(g.bound, &root)) {
        bdd.Emit(s, root);
        return;
      }
      EncodeAdder(s, g.terms, g.bound);
      return;
    }
    case PbMethod::kAdder:
    case PbMethod::kAuto:
      EncodeAdder(s, g.terms, g.bound);
      return;
  }
}

}  // namespace

AmoMethod DefaultAmoMethod(std::size_t n, const EncodeConfig& config) {
  return n <= static_cast<std::size_t>(config.pairwise_amo_max) ? AmoMethod::kPairwise
                                                                : AmoMethod::kSequential;
}

WcnfInstance EncodeSession::ToInstance() const {
  WcnfInstance out;
  out.num_vars = num_vars_;
  out.hard = hard_;
  out.soft = soft_;
  out.cost_offset = cost_offset;
  return out;
}

void EncodeOr(EncodeSession& session, std::span<const Lit> lits) {
  if (lits.empty()) throw Error(ErrorCode::kEmptyConstraint, "empty logical OR");
  session.AddHard(Clause(lits.begin(), lits.end()));
}

void EncodeAnd(EncodeSession& session, Lit y, std::span<const Lit> xs) {
  Clause big{y};
  for (Lit x : xs) big.push_back(~x);
  session.AddHard(std::move(big));
  for (Lit x : xs) session.AddHard({~y, x});
}

void EncodeAmo(EncodeSession& session, std::span<const Lit> lits, AmoMethod method) {
  const std::size_t n = lits.size();
  if (n <= 1) return;
  if (method == AmoMethod::kPairwise) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) session.AddHard({~lits[i], ~lits[j]});
    }
    return;
  }
  // Sequential counter: s_i means "some of x_1..x_i is true".
  std::vector<Lit> s;
  for (std::size_t i = 0; i + 1 < n; ++i) s.push_back(session.NewLit());
  session.AddHard({~lits[0], s[0]});
  for (std::size_t i = 1; i + 1 < n; ++i) {
    session.AddHard({~s[i - 1], s[i]});
    session.AddHard({~lits[i], s[i]});
    session.AddHard({~lits[i], ~s[i - 1]});
  }
  session.AddHard({~lits[n - 1], ~s[n - 2]});
}

void EncodeExactlyOne(EncodeSession& session, std::span<const Lit> lits, AmoMethod method) {
  EncodeAmo(session, lits, method);
  EncodeOr(session, lits);
}

void EncodePb(EncodeSession& session, std::vector<PbTerm> terms, std::int64_t lhs,
              std::int64_t rhs, const EncodeConfig& config, PbMethod method) {
  if (lhs == kNegInf && rhs == kPosInf) {
    throw Error(ErrorCode::kInvalidArgument, "pseudo-Boolean constraint without bounds");
  }
  if (lhs != kNegInf) EncodeGeq(session, Normalize(terms, lhs), config, method);
  if (rhs != kPosInf) {
    // sum <= rhs  <=>  sum(-coef * lit) >= -rhs
    for (PbTerm& t : terms) t.coef = -t.coef;
    EncodeGeq(session, Normalize(terms, -static_cast<i128>(rhs)), config, method);
  }
}

EncodeSession EncodeVariables(const SimplifiedModel& simp) {
  const std::vector<VarDisposition>& disp = simp.var_map.dispositions;
  const std::size_t n = disp.size();
  EncodeSession session;
  session.literal_of.assign(n, std::nullopt);
  auto get_or_create = [&](int v) {
    if (!session.literal_of[v]) session.literal_of[v] = session.NewLit();
    return *session.literal_of[v];
  };
  auto map_var = [&](int v) {
    const VarDisposition& d = disp[v];
    switch (d.kind) {
      case DispositionKind::kFixed:
        break;
      case DispositionKind::kFree:
        get_or_create(v);
        break;
      case DispositionKind::kSimpleAggregated:
        session.literal_of[v] = get_or_create(d.target) ^ d.negated;
        break;
      case DispositionKind::kMultiAggregated:
        if (simp.original_vars[v].kind == VarKind::kDecision) {
          const Lit lit = session.NewLit();
          session.literal_of[v] = lit;
          session.pending.push_back({lit, d.c0, d.terms});
        }
        break;
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (simp.original_vars[v].kind == VarKind::kDecision) map_var(static_cast<int>(v));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (simp.original_vars[v].kind != VarKind::kDecision) map_var(static_cast<int>(v));
  }
  return session;
}

namespace {

std::vector<int> OriginalOfNewIndex(const SimplifiedModel& simp) {
  std::vector<int> out(simp.var_map.free_count, -1);
  for (std::size_t v = 0; v < simp.var_map.new_index_of.size(); ++v) {
    if (simp.var_map.new_index_of[v] >= 0) out[simp.var_map.new_index_of[v]] = static_cast<int>(v);
  }
  return out;
}

}  // namespace

void EncodeObjective(const SimplifiedModel& simp, EncodeSession& session) {
  const std::vector<int> original = OriginalOfNewIndex(simp);
  i128 positive = 0;
  for (const Term& t : simp.model.objective.terms) {
    const Lit lit = *session.literal_of[original[t.var]];
    if (t.coef > 0) {
      session.AddSoft({lit}, t.coef);
      positive += t.coef;
    } else if (t.coef < 0) {
      session.AddSoft({~lit}, -t.coef);
    }
  }
  const i128 offset = static_cast<i128>(simp.model.base_cost_offset) +
                      simp.model.soft_weight_total - simp.objective_offset_delta - positive;
  if (offset < 0) {
    throw Error(ErrorCode::kInvalidArgument, "NegativeCostOffset: objective bridge violated");
  }
  if (offset >= static_cast<i128>(kPosInf)) {
    throw Error(ErrorCode::kOverflow, "cost offset exceeds 2^63-1");
  }
  session.cost_offset = static_cast<Weight>(offset);
}

std::variant<EncodedModel, Unencodable> EncodeModel(const SimplifiedModel& simp,
                                                    const EncodeConfig& config) {
  EncodeSession session = EncodeVariables(simp);
  const std::vector<int> original = OriginalOfNewIndex(simp);
  auto lit = [&](int new_index) { return *session.literal_of[original[new_index]]; };
  auto signed_lits = [&](const LinConstraint& c) {
    std::vector<Lit> out;
    for (const Term& t : c.terms) out.push_back(t.coef > 0 ? lit(t.var) : ~lit(t.var));
    return out;
  };

  const auto& rows = simp.model.constraints;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const LinConstraint& c = rows[r];
    switch (c.cls) {
      case ConstraintClass::kLogicalOr:
        EncodeOr(session, signed_lits(c));
        break;
      case ConstraintClass::kSoftLink: {
        // sum over the link reads: not all of (+1 vars true, -1 vars false).
        std::vector<Lit> clause;
        for (const Term& t : c.terms) clause.push_back(t.coef > 0 ? ~lit(t.var) : lit(t.var));
        EncodeOr(session, clause);
        break;
      }
      case ConstraintClass::kSetppcPacking: {
        std::vector<Lit> lits = signed_lits(c);
        EncodeAmo(session, lits, DefaultAmoMethod(lits.size(), config));
        break;
      }
      case ConstraintClass::kSetppcPartitioning: {
        std::vector<Lit> lits = signed_lits(c);
        EncodeExactlyOne(session, lits, DefaultAmoMethod(lits.size(), config));
        break;
      }
      case ConstraintClass::kLogicalAnd: {
        std::vector<Lit> xs;
        for (std::size_t i = 1; i < c.terms.size(); ++i) xs.push_back(lit(c.terms[i].var));
        EncodeAnd(session, lit(c.terms[0].var), xs);
        break;
      }
      case ConstraintClass::kGeneralLinear: {
        std::vector<PbTerm> terms;
        for (const Term& t : c.terms) terms.push_back({t.coef, lit(t.var)});
        try {
          EncodePb(session, std::move(terms), c.lhs, c.rhs, config);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kTriviallyFalse) throw;
          session.AddHard({});
        }
        break;
      }
      case ConstraintClass::kOpaque:
        return Unencodable{c.cls, r};
    }
  }

  for (const EncodeSession::PendingEquality& eq : session.pending) {
    // lit = c0 + sum(ci * yi)  <=>  lit - sum(ci * yi) = c0
    std::vector<PbTerm> terms{{1, eq.lit}};
    for (const Term& t : eq.terms) terms.push_back({-t.coef, *session.literal_of[t.var]});
    try {
      EncodePb(session, std::move(terms), eq.c0, eq.c0, config);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTriviallyFalse) throw;
      session.AddHard({});
    }
  }

  EncodeObjective(simp, session);
  EncodedModel out;
  out.instance = session.ToInstance();
  out.literal_of = std::move(session.literal_of);
  return out;
}

}  // namespace ilpsimp
