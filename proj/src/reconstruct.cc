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

#include <json.hpp>

#include "ilpsimp/error.h"
#include "ilpsimp/oracle.h"

namespace ilpsimp {

using nlohmann::json;

ReconstructionRecord MakeRecord(const SimplifiedModel& simp, const EncodedModel& encoded,
                                int origin_num_vars) {
  ReconstructionRecord rec;
  rec.origin_num_vars = origin_num_vars;
  rec.simp_num_vars = encoded.instance.num_vars;
  rec.cost_offset = encoded.instance.cost_offset;
  const auto& disp = simp.var_map.dispositions;
  if (static_cast<int>(disp.size()) < origin_num_vars) {
    throw Error(ErrorCode::kInvalidArgument, "variable map smaller than the original instance");
  }
  for (int v = 0; v < origin_num_vars; ++v) {
    const VarDisposition& d = disp[v];
    VarRecovery r;
    switch (d.kind) {
      case DispositionKind::kFixed:
        r.kind = VarRecovery::Kind::kFixed;
        r.value = d.value;
        break;
      case DispositionKind::kFree:
      case DispositionKind::kSimpleAggregated:
        r.kind = VarRecovery::Kind::kLiteral;
        r.lit = *encoded.literal_of[v];
        break;
      case DispositionKind::kMultiAggregated:
        r.kind = VarRecovery::Kind::kExpression;
        r.c0 = d.c0;
        for (const Term& t : d.terms) r.terms.push_back({t.coef, *encoded.literal_of[t.var]});
        break;
    }
    rec.vars.push_back(std::move(r));
  }
  return rec;
}

std::string RecordToJson(const ReconstructionRecord& record) {
  json fixed = json::array();
  json literals = json::array();
  json multi = json::array();
  for (std::size_t i = 0; i < record.vars.size(); ++i) {
    const VarRecovery& r = record.vars[i];
    const int x = static_cast<int>(i) + 1;
    switch (r.kind) {
      case VarRecovery::Kind::kFixed:
        fixed.push_back({x, r.value});
        break;
      case VarRecovery::Kind::kLiteral:
        literals.push_back({x, r.lit.ToDimacs()});
        break;
      case VarRecovery::Kind::kExpression: {
        json terms = json::array();
        for (const auto& t : r.terms) terms.push_back({t.coef, t.lit.ToDimacs()});
        multi.push_back({{"var", x}, {"c0", r.c0}, {"terms", terms}});
        break;
      }
    }
  }
  json j = {{"version", record.version},
            {"originNumVars", record.origin_num_vars},
            {"simpNumVars", record.simp_num_vars},
            {"costOffset", record.cost_offset},
            {"fixed", fixed},
            {"literals", literals},
            {"multi", multi}};
  return j.dump(1) + "\n";
}

ReconstructionRecord RecordFromJson(const std::string& text) {
  ReconstructionRecord rec;
  try {
    const json j = json::parse(text);
    rec.version = j.at("version").get<int>();
    if (rec.version != kRecordVersion) {
      throw Error(ErrorCode::kMalformedLine,
                  "unsupported record version " + std::to_string(rec.version));
    }
    rec.origin_num_vars = j.at("originNumVars").get<int>();
    rec.simp_num_vars = j.at("simpNumVars").get<int>();
    rec.cost_offset = j.at("costOffset").get<Weight>();
    if (rec.origin_num_vars < 0) throw Error(ErrorCode::kMalformedLine, "negative variable count");
    rec.vars.assign(rec.origin_num_vars, VarRecovery{});
    std::vector<bool> seen(rec.origin_num_vars, false);
    auto slot = [&](int x) -> VarRecovery& {
      if (x < 1 || x > rec.origin_num_vars || seen[x - 1]) {
        throw Error(ErrorCode::kMalformedLine, "bad variable " + std::to_string(x) + " in record");
      }
      seen[x - 1] = true;
      return rec.vars[x - 1];
    };
    for (const json& e : j.at("fixed")) {
      VarRecovery& r = slot(e.at(0).get<int>());
      r.kind = VarRecovery::Kind::kFixed;
      r.value = e.at(1).get<int>();
    }
    for (const json& e : j.at("literals")) {
      VarRecovery& r = slot(e.at(0).get<int>());
      r.kind = VarRecovery::Kind::kLiteral;
      r.lit = Lit::FromDimacs(e.at(1).get<int>());
    }
    for (const json& e : j.at("multi")) {
      VarRecovery& r = slot(e.at("var").get<int>());
      r.kind = VarRecovery::Kind::kExpression;
      r.c0 = e.at("c0").get<std::int64_t>();
      for (const json& t : e.at("terms")) {
        r.terms.push_back({t.at(0).get<std::int64_t>(), Lit::FromDimacs(t.at(1).get<int>())});
      }
    }
    for (bool s : seen) {
      if (!s) throw Error(ErrorCode::kMalformedLine, "record does not cover every variable");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedLine, std::string("record: ") + e.what());
  }
  return rec;
}

Assignment Reconstruct(const Assignment& simp_sol, const ReconstructionRecord& record) {
  if (simp_sol.size() < record.simp_num_vars) {
    throw Error(ErrorCode::kLengthMismatch, "simplified solution does not cover every variable");
  }
  auto lit_value = [&](Lit l) {
    if (l.var() < 1 || l.var() > simp_sol.size()) {
      throw Error(ErrorCode::kRangeError, "record literal outside the simplified instance");
    }
    return simp_sol.value(l);
  };
  Assignment out(record.origin_num_vars);
  for (int x = 1; x <= record.origin_num_vars; ++x) {
    const VarRecovery& r = record.vars[x - 1];
    switch (r.kind) {
      case VarRecovery::Kind::kFixed:
        out.set(x, r.value != 0);
        break;
      case VarRecovery::Kind::kLiteral:
        out.set(x, lit_value(r.lit));
        break;
      case VarRecovery::Kind::kExpression: {
        __int128 v = r.c0;
        for (const auto& t : r.terms) v += lit_value(t.lit) ? t.coef : 0;
        if (v != 0 && v != 1) {
          throw Error(ErrorCode::kRangeError,
                      "aggregated variable x" + std::to_string(x) + " evaluates outside {0,1}");
        }
        out.set(x, v == 1);
        break;
      }
    }
  }
  return out;
}

Verdict VerifyOptimal(const WcnfInstance& origin, const Assignment& origin_sol, Weight claimed_cost,
                      const VerifyConfig& config) {
  Verdict verdict;
  Assignment sol = origin_sol;
  sol.resize(origin.num_vars);
  const Evaluation eval = Evaluate(origin, sol);
  if (!eval.feasible) {
    verdict.failures.push_back(VerdictFailure::kHardViolation);
  } else {
    verdict.cost = eval.cost;
    if (eval.cost != claimed_cost) verdict.failures.push_back(VerdictFailure::kCostMismatch);
  }
  if (origin.num_vars <= config.oracle_var_limit && origin.num_vars <= kBruteForceMaxVars) {
    verdict.oracle_checked = true;
    const OracleResult oracle = BruteForce(origin);
    if (oracle.status == OracleStatus::kOptimum) {
      verdict.oracle_cost = oracle.cost;
      if (eval.feasible && eval.cost != oracle.cost) {
        verdict.failures.push_back(VerdictFailure::kNotOptimal);
      }
    }
  }
  return verdict;
}

}  // namespace ilpsimp
