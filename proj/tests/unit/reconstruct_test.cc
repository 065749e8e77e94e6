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

#include "ilpsimp/reconstruct.h"

#include <gtest/gtest.h>

#include <random>

#include "ilpsimp/error.h"
#include "ilpsimp/oracle.h"
#include "ilpsimp/pipeline.h"
#include "support/random_instances.h"

namespace ilpsimp {
namespace {

ReconstructionRecord ChainRecord() {
  ReconstructionRecord rec;
  rec.origin_num_vars = 3;
  rec.simp_num_vars = 1;
  VarRecovery neg;
  neg.kind = VarRecovery::Kind::kLiteral;
  neg.lit = Lit(1, true);
  VarRecovery pos = neg;
  pos.lit = Lit(1, false);
  rec.vars = {neg, pos, pos};
  return rec;
}

TEST(ReconstructTest, ChainExample) {
  Assignment simp(1);
  simp.set(1, true);
  const Assignment out = Reconstruct(simp, ChainRecord());
  EXPECT_FALSE(out.value(1));
  EXPECT_TRUE(out.value(2));
  EXPECT_TRUE(out.value(3));
}

TEST(ReconstructTest, AllFixedIgnoresSolution) {
  ReconstructionRecord rec;
  rec.origin_num_vars = 2;
  VarRecovery one;
  one.value = 1;
  rec.vars = {one, VarRecovery{}};
  for (bool v : {false, true}) {
    Assignment simp(1);
    simp.set(1, v);
    const Assignment out = Reconstruct(simp, rec);
    EXPECT_TRUE(out.value(1));
    EXPECT_FALSE(out.value(2));
  }
}

TEST(ReconstructTest, ExpressionRange) {
  ReconstructionRecord rec;
  rec.origin_num_vars = 1;
  rec.simp_num_vars = 2;
  VarRecovery e;
  e.kind = VarRecovery::Kind::kExpression;
  e.c0 = 2;
  e.terms = {{-1, Lit(1, false)}, {-1, Lit(2, false)}};
  rec.vars = {e};
  Assignment a(2);
  a.set(1, true);
  EXPECT_TRUE(Reconstruct(a, rec).value(1));
  a.set(2, true);
  EXPECT_FALSE(Reconstruct(a, rec).value(1));
  try {
    Reconstruct(Assignment(2), rec);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::kRangeError);
  }
}

TEST(ReconstructTest, ShortSolutionRejected) {
  EXPECT_THROW(Reconstruct(Assignment(0), ChainRecord()), Error);
}

TEST(RecordJsonTest, RoundTrip) {
  ReconstructionRecord rec = ChainRecord();
  VarRecovery e;
  e.kind = VarRecovery::Kind::kExpression;
  e.c0 = 1;
  e.terms = {{-1, Lit(1, true)}};
  VarRecovery f;
  f.value = 1;
  rec.vars.push_back(e);
  rec.vars.push_back(f);
  rec.origin_num_vars = 5;
  rec.cost_offset = 17;
  const std::string text = RecordToJson(rec);
  EXPECT_EQ(RecordFromJson(text), rec);
  EXPECT_EQ(RecordToJson(RecordFromJson(text)), text);
}

TEST(RecordJsonTest, Rejects) {
  EXPECT_THROW(RecordFromJson("{"), Error);
  EXPECT_THROW(RecordFromJson(R"({"version":2,"originNumVars":0,"simpNumVars":0,
      "costOffset":0,"fixed":[],"literals":[],"multi":[]})"),
               Error);
  EXPECT_THROW(RecordFromJson(R"({"version":1,"originNumVars":1,"simpNumVars":0,
      "costOffset":0,"fixed":[],"literals":[],"multi":[]})"),
               Error);
}

TEST(VerifyTest, Verdicts) {
  const WcnfInstance inst = ParseWcnf("h 1 2 0\n3 -1 0\n2 -2 0\n");
  Assignment good(2);
  good.set(2, true);
  EXPECT_TRUE(VerifyOptimal(inst, good, 2).ok());

  const Verdict bad_hard = VerifyOptimal(inst, Assignment(2), 0);
  EXPECT_EQ(bad_hard.failures, std::vector<VerdictFailure>{VerdictFailure::kHardViolation});

  const Verdict off_by_one = VerifyOptimal(inst, good, 3);
  EXPECT_EQ(off_by_one.failures, std::vector<VerdictFailure>{VerdictFailure::kCostMismatch});

  Assignment worse(2);
  worse.set(1, true);
  const Verdict suboptimal = VerifyOptimal(inst, worse, 3);
  EXPECT_EQ(suboptimal.failures, std::vector<VerdictFailure>{VerdictFailure::kNotOptimal});
  EXPECT_TRUE(suboptimal.oracle_checked);
}

// Lifting preserves cost for every feasible simplified assignment.
TEST(ReconstructPropertyTest, LiftingPreservesCost) {
  std::mt19937_64 rng(2718);
  testing::InstanceShape shape;
  shape.max_vars = 10;
  shape.max_clauses = 24;
  int lifted = 0;
  for (int i = 0; i < 300; ++i) {
    const WcnfInstance origin = testing::RandomInstance(rng, shape);
    const PreprocessOutcome pre = Preprocess(origin, PipelineConfig{});
    if (!pre.simp || pre.simp->num_vars > 18) continue;
    const WcnfInstance& simp = *pre.simp;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << simp.num_vars); ++m) {
      const Assignment sigma = testing::FromMask(m, simp.num_vars);
      const Evaluation es = Evaluate(simp, sigma);
      if (!es.feasible) continue;
      const Evaluation eo = Evaluate(origin, Reconstruct(sigma, *pre.record));
      ASSERT_TRUE(eo.feasible) << "instance " << i;
      ASSERT_LE(eo.cost, es.cost) << "instance " << i;
      ++lifted;
    }
    const OracleResult so = BruteForce(simp);
    if (so.status == OracleStatus::kOptimum) {
      const Evaluation eo = Evaluate(origin, Reconstruct(so.witness, *pre.record));
      ASSERT_EQ(eo.cost, so.cost);
    }
  }
  EXPECT_GT(lifted, 1000);
}

}  // namespace
}  // namespace ilpsimp
