#pragma once

#include <string>
#include <vector>

#include "safebandit/checks.hpp"
#include "safebandit/episode.hpp"
#include "safebandit/gmdp.hpp"
#include "safebandit/monte_carlo.hpp"

namespace safebandit {

/// Fixed 17-significant-digit decimal formatting, identical across platforms
/// and round-trippable back to the same double.
std::string format_double(double v);

std::string value_table_csv(const Instance& inst, const ValueTable& table);
std::string policy_table_csv(const Instance& inst, const PolicyTable& pol);
std::string reach_table_csv(const Instance& inst, const ReachTable& table);

/// `t, portfolio (arm:weight;...), realized_arm, r_t, safety_margin, phase`
std::string episode_trace_csv(const std::vector<RoundLog>& rounds);

struct McSummaryRow {
    std::int64_t T = 0;
    McResult result;
    double w_star = 0.0;
    double floor = 0.0; // NaN when the bound is vacuous or delta undefined
};

std::string mc_summary_csv(const std::vector<McSummaryRow>& rows);

std::string check_reports_csv(const std::vector<CheckReport>& reports);
/// Parses check_reports_csv output back (used to verify lossless round-trips).
std::vector<CheckReport> parse_check_reports_csv(const std::string& text);

std::string check_reports_json(const std::string& suite, const std::vector<CheckReport>& reports);
std::vector<CheckReport> parse_check_reports_json(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace safebandit
