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

#include <gtest/gtest.h>

#include <random>

#include "ilpsimp/error.h"
#include "ilpsimp/oracle.h"
#include "support/random_instances.h"

namespace ilpsimp {
namespace {

Clause C(std::initializer_list<int> lits) {
  Clause c;
  for (int l : lits) c.push_back(Lit::FromDimacs(l));
  return c;
}

std::vector<Lit> Inputs(EncodeSession& s, int n) {
  std::vector<Lit> out;
  for (int i = 0; i < n; ++i) out.push_back(s.NewLit());
  return out;
}

std::vector<bool> Extendable(const EncodeSession& s, int n) {
  return testing::ExtendableInputs(s.hard(), s.num_vars(), n);
}

template <typename Pred>
std::vector<bool> Expected(int n, Pred pred) {
  std::vector<bool> out(std::size_t{1} << n);
  for (std::uint64_t m = 0; m < out.size(); ++m) out[m] = pred(m);
  return out;
}

int Popcount(std::uint64_t m) { return __builtin_popcountll(m); }

TEST(EncodeOrTest, Clauses) {
  EncodeSession s;
  auto x = Inputs(s, 2);
  EncodeOr(s, std::vector<Lit>{x[0], ~x[1]});
  EXPECT_EQ(s.hard(), std::vector<Clause>{C({1, -2})});

  EncodeSession u;
  auto y = Inputs(u, 1);
  EncodeOr(u, y);
  EXPECT_EQ(u.hard(), std::vector<Clause>{C({1})});

  try {
    EncodeOr(u, std::vector<Lit>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyConstraint);
  }
}

TEST(EncodeAndTest, Clauses) {
  EncodeSession s;
  auto v = Inputs(s, 3);  // y, a, b
  EncodeAnd(s, v[0], std::vector<Lit>{v[1], v[2]});
  EXPECT_EQ(s.hard(), (std::vector<Clause>{C({1, -2, -3}), C({-1, 2}), C({-1, 3})}));

  EncodeSession t;
  auto w = Inputs(t, 2);
  EncodeAnd(t, w[0], std::vector<Lit>{w[1]});
  EXPECT_EQ(t.hard(), (std::vector<Clause>{C({1, -2}), C({-1, 2})}));
}

TEST(EncodeAndTest, ExhaustiveThree) {
  EncodeSession s;
  auto v = Inputs(s, 4);
  EncodeAnd(s, v[0], std::vector<Lit>{v[1], v[2], v[3]});
  EXPECT_EQ(Extendable(s, 4), Expected(4, [](std::uint64_t m) {
              return (m & 1u) == ((m >> 1) == 7u);
            }));
}

TEST(EncodeAmoTest, Pairwise) {
  EncodeSession s;
  auto x = Inputs(s, 3);
  EncodeAmo(s, x, AmoMethod::kPairwise);
  EXPECT_EQ(s.hard(), (std::vector<Clause>{C({-1, -2}), C({-1, -3}), C({-2, -3})}));
}

TEST(EncodeAmoTest, Sequential) {
  EncodeSession s;
  auto x = Inputs(s, 3);
  EncodeAmo(s, x, AmoMethod::kSequential);
  // a b c = 1 2 3, s1 s2 = 4 5
  EXPECT_EQ(s.hard(), (std::vector<Clause>{C({-1, 4}), C({-4, 5}), C({-2, 5}), C({-2, -4}),
                                            C({-3, -5})}));
  EXPECT_EQ(s.num_vars(), 5);
  EXPECT_EQ(Extendable(s, 3), Expected(3, [](std::uint64_t m) { return Popcount(m) <= 1; }));
}

TEST(EncodeAmoTest, SingletonIsVacuous) {
  EncodeSession s;
  auto x = Inputs(s, 1);
  EncodeAmo(s, x, AmoMethod::kSequential);
  EXPECT_TRUE(s.hard().empty());
}

TEST(EncodeAmoTest, DefaultMethod) {
  EXPECT_EQ(DefaultAmoMethod(6, {}), AmoMethod::kPairwise);
  EXPECT_EQ(DefaultAmoMethod(7, {}), AmoMethod::kSequential);
}

TEST(EncodeExactlyOneTest, Examples) {
  EncodeSession s;
  auto x = Inputs(s, 2);
  EncodeExactlyOne(s, x, AmoMethod::kPairwise);
  EXPECT_EQ(s.hard(), (std::vector<Clause>{C({-1, -2}), C({1, 2})}));

  EncodeSession u;
  auto y = Inputs(u, 1);
  EncodeExactlyOne(u, y, AmoMethod::kPairwise);
  EXPECT_EQ(u.hard(), std::vector<Clause>{C({1})});

  for (AmoMethod m : {AmoMethod::kPairwise, AmoMethod::kSequential}) {
    EncodeSession e;
    auto z = Inputs(e, 4);
    EncodeExactlyOne(e, z, m);
    EXPECT_EQ(Extendable(e, 4), Expected(4, [](std::uint64_t k) { return Popcount(k) == 1; }));
  }
}

TEST(EncodePbTest, WeightedAtMost) {
  // 2a + b + c <= 2 holds on 5 of the 8 points.
  for (PbMethod m : {PbMethod::kAuto, PbMethod::kBdd, PbMethod::kAdder}) {
    EncodeSession s;
    auto x = Inputs(s, 3);
    EncodePb(s, {{2, x[0]}, {1, x[1]}, {1, x[2]}}, kNegInf, 2, {}, m);
    const auto got = Extendable(s, 3);
    EXPECT_EQ(got, Expected(3, [](std::uint64_t k) {
                return 2 * (k & 1) + ((k >> 1) & 1) + ((k >> 2) & 1) <= 2;
              }));
    EXPECT_EQ(std::count(got.begin(), got.end(), true), 5);
  }
}

TEST(EncodePbTest, ForcedUnits) {
  EncodeSession s;
  auto x = Inputs(s, 3);
  EncodePb(s, {{1, x[0]}, {1, x[1]}, {1, x[2]}}, 3, kPosInf, {});
  EXPECT_EQ(s.hard(), (std::vector<Clause>{C({1}), C({2}), C({3})}));
  EXPECT_EQ(s.num_vars(), 3);
}

TEST(EncodePbTest, EqualityMatchesPartitioning) {
  EncodeSession s;
  auto x = Inputs(s, 2);
  EncodePb(s, {{1, x[0]}, {1, x[1]}}, 1, 1, {});
  EncodeSession p;
  auto y = Inputs(p, 2);
  EncodeExactlyOne(p, y, AmoMethod::kPairwise);
  EXPECT_EQ(Extendable(s, 2), Extendable(p, 2));
}

TEST(EncodePbTest, TriviallyFalse) {
  EncodeSession s;
  auto x = Inputs(s, 2);
  try {
    EncodePb(s, {{1, x[0]}, {1, x[1]}}, 3, kPosInf, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTriviallyFalse);
  }
}

TEST(EncodePbTest, BddLimitFallsBackToAdder) {
  EncodeConfig tiny;
  tiny.bdd_node_limit = 1;
  EncodeSession s;
  auto x = Inputs(s, 4);
  std::vector<PbTerm> terms{{3, x[0]}, {-5, x[1]}, {2, x[2]}, {7, x[3]}};
  EncodePb(s, terms, 2, 8, tiny, PbMethod::kBdd);
  EXPECT_EQ(Extendable(s, 4), Expected(4, [](std::uint64_t k) {
              const int act = 3 * (k & 1) - 5 * ((k >> 1) & 1) + 2 * ((k >> 2) & 1) +
                              7 * ((k >> 3) & 1);
              return act >= 2 && act <= 8;
            }));
}

TEST(EncodePbTest, RandomAgainstEnumeration) {
  std::mt19937_64 rng(77);
  for (int i = 0; i < 150; ++i) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<int> coef(n);
    int lo = 0, hi = 0;
    for (int& c : coef) {
      c = static_cast<int>(rng() % 15) - 7;
      if (c == 0) c = 1;
      (c > 0 ? hi : lo) += c;
    }
    const int lhs = lo - 1 + static_cast<int>(rng() % (hi - lo + 3));
    const int rhs = lhs + static_cast<int>(rng() % 4);
    auto truth = Expected(n, [&](std::uint64_t k) {
      int act = 0;
      for (int j = 0; j < n; ++j) act += ((k >> j) & 1) ? coef[j] : 0;
      return act >= lhs && act <= rhs;
    });
    for (PbMethod m : {PbMethod::kBdd, PbMethod::kAdder}) {
      EncodeSession s;
      auto x = Inputs(s, n);
      std::vector<PbTerm> terms;
      for (int j = 0; j < n; ++j) terms.push_back({coef[j], x[j]});
      try {
        EncodePb(s, terms, lhs, rhs, {}, m);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), ErrorCode::kTriviallyFalse);
        EXPECT_EQ(std::count(truth.begin(), truth.end(), true), 0);
        continue;
      }
      ASSERT_EQ(Extendable(s, n), truth) << "case " << i;
    }
  }
}

TEST(EncodeVariablesTest, ChainMapping) {
  SimplifiedModel simp;
  simp.original_vars.assign(3, IlpVar{});
  auto canon = Canonicalize({VarDisposition::Simple(1, true), VarDisposition::Simple(2, false),
                             VarDisposition::Free()});
  simp.var_map = std::get<VarMap>(canon);
  const EncodeSession s = EncodeVariables(simp);
  EXPECT_EQ(s.num_vars(), 1);
  EXPECT_EQ(s.literal_of[0], Lit(1, true));
  EXPECT_EQ(s.literal_of[1], Lit(1, false));
  EXPECT_EQ(s.literal_of[2], Lit(1, false));
}

TEST(EncodeVariablesTest, FixedAndMulti) {
  SimplifiedModel simp;
  simp.original_vars.assign(4, IlpVar{});
  simp.var_map.dispositions = {VarDisposition::Fixed(1), VarDisposition::Free(),
                               VarDisposition::Free(),
                               VarDisposition::Multi(2, {{-1, 1}, {-1, 2}})};
  simp.var_map.new_index_of = {-1, 0, 1, -1};
  simp.var_map.free_count = 2;
  const EncodeSession s = EncodeVariables(simp);
  EXPECT_FALSE(s.literal_of[0]);
  EXPECT_EQ(s.num_vars(), 3);
  ASSERT_EQ(s.pending.size(), 1u);
  EXPECT_EQ(s.pending[0].c0, 2);
  EXPECT_EQ(s.pending[0].lit, *s.literal_of[3]);
}

TEST(EncodeObjectiveTest, SignRules) {
  SimplifiedModel simp;
  simp.original_vars.assign(2, IlpVar{});
  simp.var_map.dispositions.assign(2, VarDisposition::Free());
  simp.var_map.new_index_of = {0, 1};
  simp.var_map.free_count = 2;
  simp.model.vars.assign(2, IlpVar{});
  simp.model.objective.terms = {{3, 0}, {-2, 1}};
  simp.model.soft_weight_total = 3;
  EncodeSession s = EncodeVariables(simp);
  EncodeObjective(simp, s);
  ASSERT_EQ(s.soft().size(), 2u);
  EXPECT_EQ(s.soft()[0].lits, C({1}));
  EXPECT_EQ(s.soft()[0].weight, 3);
  EXPECT_EQ(s.soft()[1].lits, C({-2}));
  EXPECT_EQ(s.soft()[1].weight, 2);
  EXPECT_EQ(s.cost_offset, 0);
}

SimplifiedModel Untouched(const IlpModel& m) {
  SimplifiedModel simp;
  simp.model = m;
  simp.original_vars = m.vars;
  simp.var_map.dispositions.assign(m.vars.size(), VarDisposition::Free());
  for (int v = 0; v < m.num_vars(); ++v) simp.var_map.new_index_of.push_back(v);
  simp.var_map.free_count = m.num_vars();
  return simp;
}

TEST(EncodeModelTest, UnreducedBridge) {
  const WcnfInstance inst = ParseWcnf("h 1 2 0\n3 -1 0\n2 -2 0\n");
  auto r = EncodeModel(Untouched(BuildIlp(inst)), {});
  const WcnfInstance& out = std::get<EncodedModel>(r).instance;
  EXPECT_EQ(BruteForce(out).cost, 2);
  EXPECT_EQ(BruteForce(inst).cost, 2);
}

TEST(EncodeModelTest, SoftLinkBecomesClause) {
  const IlpModel m = BuildIlp(ParseWcnf("4 -1 0\n"));
  auto r = EncodeModel(Untouched(m), {});
  const WcnfInstance& out = std::get<EncodedModel>(r).instance;
  // (~z v ~y1), then the objective unit on z.
  ASSERT_EQ(out.hard.size(), 1u);
  EXPECT_EQ(out.hard[0], C({-1, -2}));
}

TEST(EncodeModelTest, PartitioningObjective) {
  IlpModel m;
  m.vars.assign(3, IlpVar{});
  LinConstraint row;
  row.terms = {{1, 0}, {1, 1}, {1, 2}};
  row.lhs = row.rhs = 1;
  m.constraints.push_back(ClassifyConstraint(row));
  m.objective.terms = {{1, 0}, {1, 1}, {1, 2}};
  m.soft_weight_total = 3;
  ASSERT_EQ(m.constraints[0].cls, ConstraintClass::kSetppcPartitioning);
  auto r = EncodeModel(Untouched(m), {});
  const WcnfInstance& out = std::get<EncodedModel>(r).instance;
  EXPECT_EQ(BruteForce(out).cost, 2);
}

TEST(EncodeModelTest, OpaqueIsUnencodable) {
  IlpModel m;
  m.vars.assign(2, IlpVar{});
  LinConstraint row;
  row.terms = {{1, 0}, {1, 1}};
  row.lhs = 1;
  row.cls = ConstraintClass::kOpaque;
  m.constraints.push_back(row);
  auto r = EncodeModel(Untouched(m), {});
  ASSERT_TRUE(std::holds_alternative<Unencodable>(r));
  EXPECT_EQ(std::get<Unencodable>(r).cls, ConstraintClass::kOpaque);
}

TEST(EncodeModelTest, ContiguousVariables) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const IlpModel m = testing::RandomModel(rng, 8, 3);
    const PresolveResult p = Presolve(m, {});
    if (!std::holds_alternative<SimplifiedModel>(p)) continue;
    auto r = EncodeModel(std::get<SimplifiedModel>(p), {});
    const WcnfInstance& out = std::get<EncodedModel>(r).instance;
    for (const Clause& c : out.hard) {
      for (Lit l : c) ASSERT_TRUE(l.var() >= 1 && l.var() <= out.num_vars);
    }
    for (const SoftClause& c : out.soft) {
      for (Lit l : c.lits) ASSERT_TRUE(l.var() >= 1 && l.var() <= out.num_vars);
    }
  }
}

// Optimal cost survives presolve plus re-encoding, including general rows.
TEST(EncodeModelTest, CostBridgeRandom) {
  std::mt19937_64 rng(123);
  int checked = 0;
  for (int i = 0; i < 1500; ++i) {
    const IlpModel m = testing::RandomModel(rng, 9, static_cast<int>(rng() % 5));
    const auto best = testing::BruteForceIlp(m);
    const PresolveResult p = Presolve(m, {});
    if (!std::holds_alternative<SimplifiedModel>(p)) {
      ASSERT_FALSE(best);
      continue;
    }
    auto r = EncodeModel(std::get<SimplifiedModel>(p), {});
    const WcnfInstance& out = std::get<EncodedModel>(r).instance;
    if (out.num_vars > 22) continue;
    ++checked;
    const OracleResult o = BruteForce(out);
    if (!best) {
      ASSERT_EQ(o.status, OracleStatus::kUnsat) << "model " << i;
    } else {
      ASSERT_EQ(o.status, OracleStatus::kOptimum) << "model " << i;
      ASSERT_EQ(o.cost, m.soft_weight_total - *best) << "model " << i;
    }
  }
  EXPECT_GT(checked, 700);
}

TEST(EncodeModelTest, DeterministicText) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const IlpModel m = testing::RandomModel(rng, 10, 4);
    const PresolveResult p = Presolve(m, {});
    if (!std::holds_alternative<SimplifiedModel>(p)) continue;
    const auto& simp = std::get<SimplifiedModel>(p);
    auto a = EncodeModel(simp, {});
    auto b = EncodeModel(simp, {});
    EXPECT_EQ(WriteWcnf(std::get<EncodedModel>(a).instance, Dialect::kMse22),
              WriteWcnf(std::get<EncodedModel>(b).instance, Dialect::kMse22));
  }
}

}  // namespace
}  // namespace ilpsimp
