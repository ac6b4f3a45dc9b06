#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "deadeye/analysis/stats.hpp"
#include "deadeye/runner/session.hpp"

namespace deadeye {

/// Trial counts for one participant (or the pooled cohort) in one set.
struct TrialCounts {
  int n_trials = 0;
  int correct = 0;
  int false_negatives = 0;
  int false_positives = 0;

  double accuracy() const { return n_trials ? static_cast<double>(correct) / n_trials : 0.0; }
  int errors() const { return false_negatives + false_positives; }
  /// Share of errors that are misses; empty when there are no errors.
  std::optional<double> fn_share() const;
  void add(const ResponseRecord& r);
};

struct ParticipantAccuracy {
  std::string participant_id;
  TrialCounts counts;
};

struct SetSummary {
  /// Empty for the overall row.
  std::optional<SetKind> set_kind;
  TrialCounts pooled;
  std::vector<ParticipantAccuracy> participants;  // sorted by id
  /// Mean and sample SD of the per-participant accuracies.
  Descriptive accuracy;
};

struct Summary {
  std::vector<SetSummary> sets;  // in set-kind order, only sets that occur
  SetSummary overall;
};

/// Scored (non-training) trials per set and participant. Records of logs
/// sharing a participant id are merged. Throws a domain error when there are
/// no logs or no scored trials.
Summary summarize(const std::vector<SessionLog>& logs);

/// Participants x sets accuracy matrix for the participants that have every
/// listed set, rows in participant-id order.
std::vector<std::vector<double>> accuracy_matrix(const Summary& summary, const std::vector<SetKind>& sets,
                                                 std::vector<std::string>* participant_ids = nullptr);

struct PositionMatrix {
  int rows = 5;
  int cols = 6;
  std::optional<int> depth_plane;  // empty: all planes
  std::vector<int> targets;        // row-major
  std::vector<int> hits;

  /// Hit rate of a cell; empty when no target ever appeared there.
  std::optional<double> rate(int row, int col) const;
};

struct PositionOptions {
  int rows = 5;
  int cols = 6;
  /// One matrix per depth plane instead of a single pooled one.
  bool by_plane = false;
  /// Only these set kinds (all when empty).
  std::vector<SetKind> sets;
};

/// Per-cell target detection rates over scored target trials.
std::vector<PositionMatrix> position_matrix(const std::vector<SessionLog>& logs, const PositionOptions& options = {});

struct QuestionnaireSummary {
  std::string block_label;
  QuestionnaireKind kind = QuestionnaireKind::nasa_tlx;
  std::size_t n = 0;
  /// Per item: six TLX subscales or the two custom items.
  std::vector<Descriptive> items;
};

/// Mean and SD per item, grouped by (block label, questionnaire kind) and
/// sorted by label. Records are re-checked; malformed scores throw.
std::vector<QuestionnaireSummary> tlx_aggregate(const std::vector<QuestionnaireRecord>& records);
std::vector<QuestionnaireSummary> tlx_aggregate(const std::vector<SessionLog>& logs);

}  // namespace deadeye
