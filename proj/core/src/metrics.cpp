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

#include "cgot/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "cgot/error.hpp"

namespace cgot {

std::size_t TokenLedger::rows_for_turn(int turn) const {
  return static_cast<std::size_t>(std::count_if(
      rows_.begin(), rows_.end(), [turn](const LedgerRow& row) { return row.turn == turn; }));
}

std::vector<std::uint64_t> per_turn_totals(const TokenLedger& ledger) {
  std::vector<std::uint64_t> totals;
  for (const auto& row : ledger.rows()) {
    if (row.turn < 1) continue;
    const auto index = static_cast<std::size_t>(row.turn - 1);
    if (totals.size() <= index) totals.resize(index + 1, 0);
    totals[index] += row.total();
  }
  return totals;
}

namespace {

void append_rows(std::ostringstream& out, const RunReport& report) {
  std::uint64_t cumulative = 0;
  for (std::size_t i = 0; i < report.perTurnTokens.size(); ++i) {
    cumulative += report.perTurnTokens[i];
    const int active = i < report.perTurnActive.size() ? report.perTurnActive[i] : 0;
    out << (i + 1) << ',' << to_string(report.mode) << ',' << report.perTurnTokens[i] << ','
        << cumulative << ',' << active << '\n';
  }
}

constexpr const char* kReportHeader = "turn,mode,tokens_turn,tokens_cum,active_agents\n";

}  // namespace

std::string render_report_csv(const RunReport& report) {
  std::ostringstream out;
  out << kReportHeader;
  append_rows(out, report);
  return out.str();
}

std::string render_runs_csv(const RunReport& a, const RunReport& b) {
  std::ostringstream out;
  out << kReportHeader;
  append_rows(out, a);
  append_rows(out, b);
  return out.str();
}

Comparison compare(const RunReport& a, const RunReport& b) {
  if (a.scenarioHash != b.scenarioHash) {
    throw Error(ErrorCode::IncomparableRuns,
                "scenario hash mismatch: " + a.scenarioHash + " vs " + b.scenarioHash);
  }
  if (a.seed != b.seed) {
    throw Error(ErrorCode::IncomparableRuns, "seed mismatch: " + std::to_string(a.seed) + " vs " +
                                                 std::to_string(b.seed));
  }
  Comparison comparison;
  comparison.modeA = a.mode;
  comparison.modeB = b.mode;
  const std::size_t turns = std::max(a.perTurnTokens.size(), b.perTurnTokens.size());
  std::int64_t running = 0;
  for (std::size_t i = 0; i < turns; ++i) {
    TurnDelta row;
    row.turn = static_cast<int>(i + 1);
    row.tokensA = i < a.perTurnTokens.size() ? a.perTurnTokens[i] : 0;
    row.tokensB = i < b.perTurnTokens.size() ? b.perTurnTokens[i] : 0;
    row.delta = static_cast<std::int64_t>(row.tokensA) - static_cast<std::int64_t>(row.tokensB);
    running += row.delta;
    row.cumulativeDelta = running;
    comparison.turns.push_back(row);
  }
  comparison.cumulativeDelta =
      static_cast<std::int64_t>(a.cumulativeTokens) - static_cast<std::int64_t>(b.cumulativeTokens);
  comparison.makespanDelta = a.makespanTurns - b.makespanTurns;
  return comparison;
}

std::string render_comparison_csv(const Comparison& comparison) {
  std::ostringstream out;
  out << "turn,tokens_" << to_string(comparison.modeA) << ",tokens_" << to_string(comparison.modeB)
      << ",delta,cum_delta\n";
  for (const auto& row : comparison.turns) {
    out << row.turn << ',' << row.tokensA << ',' << row.tokensB << ',' << row.delta << ','
        << row.cumulativeDelta << '\n';
  }
  return out.str();
}

std::string render_summary(const Comparison& comparison, const RunReport& a, const RunReport& b) {
  std::ostringstream out;
  const auto line = [&out](const RunReport& r) {
    out << "  " << to_string(r.mode) << ": " << (r.completed ? "completed" : "INCOMPLETE")
        << " in " << r.makespanTurns << " turns, " << r.cumulativeTokens << " tokens, "
        << r.compositionsFormed << " compositions, " << r.eventsHandled << " events\n";
  };
  out << "scenario " << a.scenarioHash << " seed " << a.seed << "\n";
  line(a);
  line(b);
  out << "  cumulative delta (" << to_string(comparison.modeA) << " - "
      << to_string(comparison.modeB) << "): " << comparison.cumulativeDelta << " tokens\n";
  out << "  makespan delta: " << comparison.makespanDelta << " turns\n";
  if (a.cumulativeTokens > 0) {
    const double saved = 100.0 * static_cast<double>(comparison.cumulativeDelta) /
                         static_cast<double>(a.cumulativeTokens);
    out.setf(std::ios::fixed);
    out.precision(1);
    out << "  relative saving: " << saved << "%\n";
  }
  return out.str();
}

}  // namespace cgot
