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

#include "ilpsimp/wcnf.h"

#include <gtest/gtest.h>

#include <random>

#include "ilpsimp/error.h"
#include "support/random_instances.h"

namespace ilpsimp {
namespace {

Clause C(std::initializer_list<int> lits) {
  Clause c;
  for (int l : lits) c.push_back(Lit::FromDimacs(l));
  return c;
}

ErrorCode CodeOf(std::string_view text) {
  try {
    ParseWcnf(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ErrorCode::kInvalidArgument;
}

TEST(ParseWcnfTest, Mse22Example) {
  const WcnfInstance inst = ParseWcnf("h 1 2 0\n3 -1 0\n2 -2 0\n");
  EXPECT_EQ(inst.num_vars, 2);
  ASSERT_EQ(inst.hard.size(), 1u);
  EXPECT_EQ(inst.hard[0], C({1, 2}));
  ASSERT_EQ(inst.soft.size(), 2u);
  EXPECT_EQ(inst.soft[0].lits, C({-1}));
  EXPECT_EQ(inst.soft[0].weight, 3);
  EXPECT_EQ(inst.soft[1].lits, C({-2}));
  EXPECT_EQ(inst.soft[1].weight, 2);
  EXPECT_EQ(inst.cost_offset, 0);
}

TEST(ParseWcnfTest, LegacyTopMarksHard) {
  const WcnfInstance inst = ParseWcnf("p wcnf 2 3 10\n10 1 2 0\n3 -1 0\n5 2 0\n");
  EXPECT_EQ(inst.num_vars, 2);
  ASSERT_EQ(inst.hard.size(), 1u);
  EXPECT_EQ(inst.hard[0], C({1, 2}));
  ASSERT_EQ(inst.soft.size(), 2u);
  EXPECT_EQ(inst.soft[1].lits, C({2}));
  EXPECT_EQ(inst.soft[1].weight, 5);
}

TEST(ParseWcnfTest, EmptyHardClause) {
  const WcnfInstance inst = ParseWcnf("h 0\n");
  EXPECT_TRUE(inst.HasEmptyHardClause());
}

TEST(ParseWcnfTest, CommentsAndBlankLines) {
  const WcnfInstance inst = ParseWcnf("c hello\n\nc costoffset 7\nh 3 0\n");
  EXPECT_EQ(inst.cost_offset, 7);
  EXPECT_EQ(inst.num_vars, 3);
}

TEST(ParseWcnfTest, Errors) {
  EXPECT_EQ(CodeOf("h 1 2\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(CodeOf("x 1 0\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(CodeOf("0 1 0\n"), ErrorCode::kWeightError);
  EXPECT_EQ(CodeOf("-4 1 0\n"), ErrorCode::kWeightError);
  EXPECT_EQ(CodeOf("p wcnf 1 1 5\n2 2 0\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(CodeOf("1 1 0 2\n"), ErrorCode::kMalformedLine);
  EXPECT_EQ(CodeOf("99999999999999999999 1 0\n"), ErrorCode::kMalformedLine);
}

TEST(ParseWcnfTest, SoftWeightOverflow) {
  const WcnfInstance inst = ParseWcnf("9223372036854775807 1 0\n1 2 0\n");
  try {
    inst.SoftWeightTotal();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverflow);
  }
}

TEST(ParseWcnfTest, TautologyKeptVerbatim) {
  const WcnfInstance inst = ParseWcnf("h 1 -1 0\n");
  ASSERT_EQ(inst.hard.size(), 1u);
  EXPECT_TRUE(IsTautology(inst.hard[0]));
}

TEST(WriteWcnfTest, EmptyInstance) {
  EXPECT_EQ(WriteWcnf(WcnfInstance{}, Dialect::kMse22), "c costoffset 0\n");
}

TEST(WriteWcnfTest, ExampleIsCanonical) {
  const std::string text = "c costoffset 0\nh 1 2 0\n3 -1 0\n2 -2 0\n";
  EXPECT_EQ(WriteWcnf(ParseWcnf(text), Dialect::kMse22), text);
}

TEST(WriteWcnfTest, LegacyTop) {
  const WcnfInstance inst = ParseWcnf("h 1 2 0\n3 -1 0\n2 -2 0\n");
  EXPECT_EQ(WriteWcnf(inst, Dialect::kLegacy),
            "p wcnf 2 3 6\nc costoffset 0\n6 1 2 0\n3 -1 0\n2 -2 0\n");
}

TEST(WriteWcnfTest, UnusedVariablesSurviveHeaderlessRoundTrip) {
  WcnfInstance inst;
  inst.num_vars = 5;
  inst.hard.push_back(C({1}));
  EXPECT_EQ(ParseWcnf(WriteWcnf(inst, Dialect::kMse22)), inst);
}

TEST(WriteWcnfTest, RoundTripRandom) {
  std::mt19937_64 rng(2024);
  testing::InstanceShape shape;
  shape.min_vars = 0;
  shape.max_clauses = 20;
  for (int i = 0; i < 1000; ++i) {
    WcnfInstance inst = testing::RandomInstance(rng, shape);
    inst.cost_offset = static_cast<Weight>(rng() % 50);
    if (i % 7 == 0) inst.hard.push_back({});
    for (Dialect d : {Dialect::kLegacy, Dialect::kMse22}) {
      ASSERT_EQ(ParseWcnf(WriteWcnf(inst, d)), inst) << "instance " << i;
    }
  }
}

TEST(SolverOutputTest, BinaryString) {
  const SolverOutput out = ParseSolverOutput("s OPTIMUM FOUND\no 2\nv 01\n", 2);
  EXPECT_EQ(out.status, SolverStatus::kOptimum);
  EXPECT_EQ(out.cost, 2);
  ASSERT_TRUE(out.assignment);
  EXPECT_FALSE(out.assignment->value(1));
  EXPECT_TRUE(out.assignment->value(2));
}

TEST(SolverOutputTest, LiteralList) {
  const SolverOutput out = ParseSolverOutput("v 1 -2\n", 2);
  ASSERT_TRUE(out.assignment);
  EXPECT_TRUE(out.assignment->value(1));
  EXPECT_FALSE(out.assignment->value(2));
}

TEST(SolverOutputTest, Unsat) {
  const SolverOutput out = ParseSolverOutput("s UNSATISFIABLE\n", 3);
  EXPECT_EQ(out.status, SolverStatus::kUnsat);
  EXPECT_FALSE(out.assignment);
}

TEST(SolverOutputTest, Errors) {
  auto code = [](std::string_view text, int n) {
    try {
      ParseSolverOutput(text, n);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code("s OPTIMUM FOUND\no 1\n", 2), ErrorCode::kNoSolutionLine);
  EXPECT_EQ(code("s OPTIMUM FOUND\nv 011\n", 4), ErrorCode::kLengthMismatch);
}

TEST(SolverOutputTest, FormatParsesBack) {
  Assignment a(3);
  a.set(2, true);
  const std::string text = FormatSolverOutput(SolverStatus::kOptimum, 4, &a);
  EXPECT_EQ(text, "s OPTIMUM FOUND\no 4\nv 010\n");
  EXPECT_EQ(ParseSolverOutput(text, 3).assignment, a);
}

TEST(EvaluateTest, Examples) {
  const WcnfInstance inst = ParseWcnf("h 1 2 0\n3 -1 0\n2 -2 0\n");
  Assignment a(2);
  a.set(2, true);
  Evaluation e = Evaluate(inst, a);
  EXPECT_TRUE(e.feasible);
  EXPECT_EQ(e.cost, 2);

  e = Evaluate(inst, Assignment(2));
  EXPECT_FALSE(e.feasible);
  EXPECT_EQ(e.violated, std::vector<std::size_t>{0});
}

TEST(EvaluateTest, AllSoftsSatisfiedCostsOffset) {
  WcnfInstance inst = ParseWcnf("4 -1 0\n");
  inst.cost_offset = 9;
  EXPECT_EQ(Evaluate(inst, Assignment(1)).cost, 9);
}

}  // namespace
}  // namespace ilpsimp
