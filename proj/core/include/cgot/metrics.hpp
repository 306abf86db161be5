// Copyright 2026 The CGoT Authors
//
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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cgot/types.hpp"

namespace cgot {

struct LedgerRow {
  int turn = 0;
  AgentId agentId;
  std::uint64_t promptTokens = 0;
  std::uint64_t completionTokens = 0;

  std::uint64_t total() const { return promptTokens + completionTokens; }
  friend bool operator==(const LedgerRow&, const LedgerRow&) = default;
};

/// Append-only per-(turn, inference unit) token record.
class TokenLedger {
 public:
  void record(LedgerRow row) { rows_.push_back(std::move(row)); }
  const std::vector<LedgerRow>& rows() const { return rows_; }
  std::size_t rows_for_turn(int turn) const;

  friend bool operator==(const TokenLedger&, const TokenLedger&) = default;

 private:
  std::vector<LedgerRow> rows_;
};

/// Element i is the prompt+completion total of turn i+1, up to the last
/// turn that has rows. Turns without rows count as zero.
std::vector<std::uint64_t> per_turn_totals(const TokenLedger& ledger);

struct RunReport {
  Mode mode = Mode::CGoT;
  bool completed = false;
  int makespanTurns = 0;
  int maxTurns = 0;
  std::vector<std::uint64_t> perTurnTokens;
  std::vector<int> perTurnActive;  // inference calls issued per turn
  std::vector<bool> perTurnCompositionLive;
  std::uint64_t cumulativeTokens = 0;
  int compositionsFormed = 0;
  int eventsHandled = 0;
  std::string scenarioHash;
  std::uint64_t seed = 0;
};

/// Columns: turn,mode,tokens_turn,tokens_cum,active_agents.
std::string render_report_csv(const RunReport& report);

struct TurnDelta {
  int turn = 0;
  std::uint64_t tokensA = 0;
  std::uint64_t tokensB = 0;
  std::int64_t delta = 0;            // A - B
  std::int64_t cumulativeDelta = 0;  // running sum of delta
};

struct Comparison {
  Mode modeA = Mode::GoT;
  Mode modeB = Mode::CGoT;
  std::vector<TurnDelta> turns;
  std::int64_t cumulativeDelta = 0;  // cumulativeTokens(A) - cumulativeTokens(B)
  int makespanDelta = 0;             // makespan(A) - makespan(B)
};

/// Throws IncomparableRuns when scenario hash or seed differ.
Comparison compare(const RunReport& a, const RunReport& b);

/// Long format with both runs, same columns as render_report_csv.
std::string render_runs_csv(const RunReport& a, const RunReport& b);

/// Columns: turn,tokens_<a>,tokens_<b>,delta,cum_delta.
std::string render_comparison_csv(const Comparison& comparison);

std::string render_summary(const Comparison& comparison, const RunReport& a, const RunReport& b);

}  // namespace cgot
