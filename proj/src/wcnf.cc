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

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "ilpsimp/error.h"

namespace ilpsimp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedLine: return "MalformedLine";
    case ErrorCode::kWeightError: return "WeightError";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNoSolutionLine: return "NoSolutionLine";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyHardClause: return "EmptyHardClause";
    case ErrorCode::kEmptyConstraint: return "EmptyConstraint";
    case ErrorCode::kTriviallyFalse: return "TriviallyFalse";
    case ErrorCode::kUnencodable: return "Unencodable";
    case ErrorCode::kRangeError: return "RangeError";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kSolverFailure: return "SolverFailure";
    case ErrorCode::kTimeout: return "Timeout";
    case ErrorCode::kVerificationFailure: return "VerificationFailure";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Weight CheckedAdd(Weight a, Weight b) {
  Weight out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw Error(ErrorCode::kOverflow, "weight sum exceeds 2^63-1");
  }
  return out;
}

bool IsTautology(const Clause& clause) {
  for (std::size_t i = 0; i < clause.size(); ++i) {
    for (std::size_t j = i + 1; j < clause.size(); ++j) {
      if (clause[i] == ~clause[j]) return true;
    }
  }
  return false;
}

bool WcnfInstance::HasEmptyHardClause() const {
  return std::any_of(hard.begin(), hard.end(),
                     [](const Clause& c) { return c.empty(); });
}

Weight WcnfInstance::SoftWeightTotal() const {
  Weight total = 0;
  for (const SoftClause& s : soft) total = CheckedAdd(total, s.weight);
  return total;
}

namespace {

std::vector<std::string_view> Tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename Int>
std::optional<Int> ParseInt(std::string_view token) {
  Int value{};
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

[[noreturn]] void Malformed(std::size_t line_no, const std::string& why) {
  throw Error(ErrorCode::kMalformedLine,
              "line " + std::to_string(line_no) + ": " + why);
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(++line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

WcnfInstance ParseWcnf(std::string_view text) {
  WcnfInstance inst;
  bool have_header = false;
  int header_vars = 0;
  std::optional<Weight> top;
  int max_var = 0;
  int comment_vars = 0;

  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = Tokenize(line);
    if (tokens.empty()) return;
    if (tokens[0] == "c" || tokens[0].front() == 'c') {
      if (tokens.size() >= 3 && tokens[0] == "c") {
        if (tokens[1] == "costoffset") {
          auto v = ParseInt<Weight>(tokens[2]);
          if (!v || *v < 0) Malformed(line_no, "bad costoffset");
          inst.cost_offset = *v;
        } else if (tokens[1] == "numvars") {
          auto v = ParseInt<int>(tokens[2]);
          if (!v || *v < 0) Malformed(line_no, "bad numvars");
          comment_vars = *v;
        }
      }
      return;
    }
    if (tokens[0] == "p") {
      if (have_header) Malformed(line_no, "duplicate header");
      if (tokens.size() < 4 || tokens[1] != "wcnf") {
        Malformed(line_no, "expected 'p wcnf <vars> <clauses> [top]'");
      }
      auto nv = ParseInt<int>(tokens[2]);
      auto nc = ParseInt<long long>(tokens[3]);
      if (!nv || *nv < 0 || !nc || *nc < 0) Malformed(line_no, "bad header counts");
      if (tokens.size() >= 5) {
        top = ParseInt<Weight>(tokens[4]);
        if (!top || *top <= 0) Malformed(line_no, "bad top weight");
      }
      if (tokens.size() > 5) Malformed(line_no, "trailing header tokens");
      have_header = true;
      header_vars = *nv;
      return;
    }

    bool is_hard = false;
    Weight weight = 0;
    if (tokens[0] == "h") {
      is_hard = true;
    } else {
      auto w = ParseInt<Weight>(tokens[0]);
      if (!w) Malformed(line_no, "non-integer weight '" + std::string(tokens[0]) + "'");
      if (*w <= 0) {
        throw Error(ErrorCode::kWeightError,
                    "line " + std::to_string(line_no) + ": soft weight must be positive");
      }
      weight = *w;
      if (top && weight >= *top) is_hard = true;
    }
    Clause clause;
    bool terminated = false;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      if (terminated) Malformed(line_no, "tokens after terminating 0");
      auto lit = ParseInt<int>(tokens[i]);
      if (!lit || *lit == std::numeric_limits<int>::min()) {
        Malformed(line_no, "non-integer literal '" + std::string(tokens[i]) + "'");
      }
      if (*lit == 0) {
        terminated = true;
        continue;
      }
      Lit l = Lit::FromDimacs(*lit);
      if (have_header && l.var() > header_vars) {
        Malformed(line_no, "variable exceeds header count");
      }
      max_var = std::max(max_var, l.var());
      clause.push_back(l);
    }
    if (!terminated) Malformed(line_no, "missing terminating 0");
    if (is_hard) {
      inst.hard.push_back(std::move(clause));
    } else {
      inst.soft.push_back({std::move(clause), weight});
    }
  });

  inst.num_vars = have_header ? header_vars : std::max(max_var, comment_vars);
  return inst;
}

WcnfInstance ReadWcnfFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseWcnf(buf.str());
}

namespace {

void AppendClause(std::string& out, const Clause& clause) {
  for (Lit l : clause) {
    out += ' ';
    out += std::to_string(l.ToDimacs());
  }
  out += " 0\n";
}

}  // namespace

std::string WriteWcnf(const WcnfInstance& instance, Dialect dialect) {
  std::string out;
  if (dialect == Dialect::kLegacy) {
    Weight top = 1;
    Weight max_weight = 0;
    bool overflow = false;
    for (const SoftClause& s : instance.soft) {
      max_weight = std::max(max_weight, s.weight);
      if (!overflow && __builtin_add_overflow(top, s.weight, &top)) overflow = true;
    }
    if (overflow) {
      if (max_weight == std::numeric_limits<Weight>::max()) {
        throw Error(ErrorCode::kOverflow, "no legacy top weight exceeds every soft weight");
      }
      top = max_weight + 1;
    }
    out += "p wcnf " + std::to_string(instance.num_vars) + " " +
           std::to_string(instance.hard.size() + instance.soft.size()) + " " +
           std::to_string(top) + "\n";
    out += "c costoffset " + std::to_string(instance.cost_offset) + "\n";
    const std::string top_str = std::to_string(top);
    for (const Clause& c : instance.hard) {
      out += top_str;
      AppendClause(out, c);
    }
    for (const SoftClause& s : instance.soft) {
      out += std::to_string(s.weight);
      AppendClause(out, s.lits);
    }
    return out;
  }

  int max_var = 0;
  for (const Clause& c : instance.hard)
    for (Lit l : c) max_var = std::max(max_var, l.var());
  for (const SoftClause& s : instance.soft)
    for (Lit l : s.lits) max_var = std::max(max_var, l.var());
  if (instance.num_vars > max_var) {
    out += "c numvars " + std::to_string(instance.num_vars) + "\n";
  }
  out += "c costoffset " + std::to_string(instance.cost_offset) + "\n";
  for (const Clause& c : instance.hard) {
    out += 'h';
    AppendClause(out, c);
  }
  for (const SoftClause& s : instance.soft) {
    out += std::to_string(s.weight);
    AppendClause(out, s.lits);
  }
  return out;
}

void WriteWcnfFile(const WcnfInstance& instance, Dialect dialect,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << WriteWcnf(instance, dialect);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

SolverOutput ParseSolverOutput(std::string_view text, int expected_vars) {
  SolverOutput result;
  std::vector<std::string_view> values;
  bool saw_v = false;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    auto tokens = Tokenize(line);
    if (tokens.empty()) return;
    if (tokens[0] == "s") {
      std::string status;
      for (std::size_t i = 1; i < tokens.size(); ++i) {
        if (i > 1) status += ' ';
        status += tokens[i];
      }
      if (status == "OPTIMUM FOUND") {
        result.status = SolverStatus::kOptimum;
      } else if (status == "SATISFIABLE") {
        result.status = SolverStatus::kSatisfiable;
      } else if (status == "UNSATISFIABLE") {
        result.status = SolverStatus::kUnsat;
      } else {
        result.status = SolverStatus::kUnknown;
      }
    } else if (tokens[0] == "o") {
      if (tokens.size() != 2) Malformed(line_no, "bad cost line");
      auto cost = ParseInt<Weight>(tokens[1]);
      if (!cost) Malformed(line_no, "bad cost line");
      result.cost = *cost;
    } else if (tokens[0] == "v") {
      saw_v = true;
      values.insert(values.end(), tokens.begin() + 1, tokens.end());
    }
  });

  if (result.status == SolverStatus::kUnsat) return result;
  if (!saw_v) throw Error(ErrorCode::kNoSolutionLine, "no 'v' line in solver output");

  Assignment assignment(expected_vars);
  bool binary = values.size() == 1 &&
                values[0].find_first_not_of("01") == std::string_view::npos &&
                (values[0].size() >= 2 || expected_vars <= 1);
  if (binary) {
    std::string_view bits = values[0];
    if (static_cast<int>(bits.size()) < expected_vars) {
      throw Error(ErrorCode::kLengthMismatch,
                  "value string has " + std::to_string(bits.size()) +
                      " entries, expected " + std::to_string(expected_vars));
    }
    for (int v = 1; v <= expected_vars; ++v) assignment.set(v, bits[v - 1] == '1');
  } else {
    for (std::string_view tok : values) {
      auto lit = ParseInt<int>(tok);
      if (!lit || *lit == std::numeric_limits<int>::min()) {
        throw Error(ErrorCode::kMalformedLine, "bad literal in 'v' line: " + std::string(tok));
      }
      if (*lit == 0) continue;
      Lit l = Lit::FromDimacs(*lit);
      if (l.var() <= expected_vars) assignment.set(l.var(), !l.negated());
    }
  }
  result.assignment = std::move(assignment);
  return result;
}

std::string FormatSolverOutput(SolverStatus status, std::optional<Weight> cost,
                               const Assignment* assignment) {
  std::string out;
  switch (status) {
    case SolverStatus::kOptimum: out += "s OPTIMUM FOUND\n"; break;
    case SolverStatus::kSatisfiable: out += "s SATISFIABLE\n"; break;
    case SolverStatus::kUnsat: out += "s UNSATISFIABLE\n"; return out;
    case SolverStatus::kUnknown: out += "s UNKNOWN\n"; break;
  }
  if (cost) out += "o " + std::to_string(*cost) + "\n";
  if (assignment != nullptr) {
    out += "v ";
    for (int v = 1; v <= assignment->size(); ++v) out += assignment->value(v) ? '1' : '0';
    out += '\n';
  }
  return out;
}

Evaluation Evaluate(const WcnfInstance& instance, const Assignment& assignment) {
  auto satisfied = [&](const Clause& c) {
    return std::any_of(c.begin(), c.end(),
                       [&](Lit l) { return assignment.value(l); });
  };
  Evaluation eval;
  for (std::size_t i = 0; i < instance.hard.size(); ++i) {
    if (!satisfied(instance.hard[i])) eval.violated.push_back(i);
  }
  eval.feasible = eval.violated.empty();
  if (!eval.feasible) return eval;
  Weight cost = instance.cost_offset;
  for (const SoftClause& s : instance.soft) {
    if (!satisfied(s.lits)) cost = CheckedAdd(cost, s.weight);
  }
  eval.cost = cost;
  return eval;
}

}  // namespace ilpsimp
