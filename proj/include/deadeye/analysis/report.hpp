#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "deadeye/analysis/stats.hpp"
#include "deadeye/analysis/summary.hpp"
#include "deadeye/core/image.hpp"

namespace deadeye {

// CSV tables (header row first, "NA" for no-data) and JSON equivalents.

std::string summary_csv(const Summary& summary);
std::string matrix_csv(const std::vector<PositionMatrix>& matrices);
std::string tlx_csv(const std::vector<QuestionnaireSummary>& summaries);
std::string test_csv(const std::vector<std::pair<std::string, TestResult>>& tests);

nlohmann::json to_json(const Summary& summary);
nlohmann::json to_json(const PositionMatrix& matrix);
nlohmann::json to_json(const QuestionnaireSummary& summary);
nlohmann::json to_json(const TestResult& result);

/// Shortest decimal that round-trips the double.
std::string format_number(double value);

// Static charts.

/// Bars of mean participant accuracy per set with +-1 SD whiskers.
RgbImage plot_accuracy(const Summary& summary);
/// Grouped bars: TLX subscale means per questionnaire block.
RgbImage plot_tlx(const std::vector<QuestionnaireSummary>& summaries);
/// Heat map of per-cell detection rates; no-data cells are grey.
RgbImage plot_position(const PositionMatrix& matrix);

}  // namespace deadeye
