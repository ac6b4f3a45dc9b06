#include "deadeye/analysis/summary.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "deadeye/core/error.hpp"

namespace deadeye {

std::optional<double> TrialCounts::fn_share() const {
  if (errors() == 0) return std::nullopt;
  return static_cast<double>(false_negatives) / errors();
}

void TrialCounts::add(const ResponseRecord& r) {
  ++n_trials;
  if (r.correct) ++correct;
  if (r.false_negative()) ++false_negatives;
  if (r.false_positive()) ++false_positives;
}

namespace {

SetSummary build(std::optional<SetKind> kind, const std::map<std::string, TrialCounts>& per_participant) {
  SetSummary s;
  s.set_kind = kind;
  std::vector<double> acc;
  for (const auto& [id, counts] : per_participant) {
    s.participants.push_back({id, counts});
    s.pooled.n_trials += counts.n_trials;
    s.pooled.correct += counts.correct;
    s.pooled.false_negatives += counts.false_negatives;
    s.pooled.false_positives += counts.false_positives;
    acc.push_back(counts.accuracy());
  }
  s.accuracy = describe(acc);
  return s;
}

}  // namespace

Summary summarize(const std::vector<SessionLog>& logs) {
  if (logs.empty()) throw Error(ErrorKind::domain, "no session logs to summarize");
  std::map<SetKind, std::map<std::string, TrialCounts>> by_set;
  std::map<std::string, TrialCounts> overall;
  for (const SessionLog& log : logs) {
    for (const ResponseRecord& r : log.responses) {
      if (r.training) continue;
      by_set[r.set_kind][log.plan.participant_id].add(r);
      overall[log.plan.participant_id].add(r);
    }
  }
  if (overall.empty()) throw Error(ErrorKind::domain, "session logs contain no scored trials");
  Summary out;
  for (SetKind kind : kAllSetKinds) {
    auto it = by_set.find(kind);
    if (it != by_set.end()) out.sets.push_back(build(kind, it->second));
  }
  out.overall = build(std::nullopt, overall);
  return out;
}

std::vector<std::vector<double>> accuracy_matrix(const Summary& summary, const std::vector<SetKind>& sets,
                                                 std::vector<std::string>* participant_ids) {
  std::map<std::string, std::vector<std::optional<double>>> rows;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (const SetSummary& s : summary.sets) {
      if (s.set_kind != sets[j]) continue;
      for (const ParticipantAccuracy& p : s.participants) {
        auto& row = rows[p.participant_id];
        row.resize(sets.size());
        row[j] = p.counts.accuracy();
      }
    }
  }
  std::vector<std::vector<double>> matrix;
  if (participant_ids) participant_ids->clear();
  for (const auto& [id, row] : rows) {
    if (row.size() != sets.size() || std::any_of(row.begin(), row.end(), [](const auto& v) { return !v; })) continue;
    std::vector<double> values;
    for (const auto& v : row) values.push_back(*v);
    matrix.push_back(std::move(values));
    if (participant_ids) participant_ids->push_back(id);
  }
  return matrix;
}

std::optional<double> PositionMatrix::rate(int row, int col) const {
  const std::size_t i = static_cast<std::size_t>(row * cols + col);
  if (targets[i] == 0) return std::nullopt;
  return static_cast<double>(hits[i]) / targets[i];
}

std::vector<PositionMatrix> position_matrix(const std::vector<SessionLog>& logs, const PositionOptions& options) {
  if (options.rows < 1 || options.cols < 1) throw Error(ErrorKind::domain, "position matrix needs a positive grid");
  std::map<std::optional<int>, PositionMatrix> out;
  auto matrix_for = [&](std::optional<int> plane) -> PositionMatrix& {
    auto [it, fresh] = out.try_emplace(plane);
    if (fresh) {
      it->second.rows = options.rows;
      it->second.cols = options.cols;
      it->second.depth_plane = plane;
      it->second.targets.assign(static_cast<std::size_t>(options.rows * options.cols), 0);
      it->second.hits.assign(static_cast<std::size_t>(options.rows * options.cols), 0);
    }
    return it->second;
  };
  if (!options.by_plane) matrix_for(std::nullopt);
  for (const SessionLog& log : logs) {
    for (const ResponseRecord& r : log.responses) {
      if (r.training || !r.target_present) continue;
      if (!options.sets.empty() && std::find(options.sets.begin(), options.sets.end(), r.set_kind) == options.sets.end()) {
        continue;
      }
      if (!r.target_cell) throw Error(ErrorKind::domain, "target trial '" + r.scene_id + "' has no target cell");
      const GridCell c = *r.target_cell;
      if (c.row < 0 || c.row >= options.rows || c.col < 0 || c.col >= options.cols) {
        throw Error(ErrorKind::domain, "target cell of '" + r.scene_id + "' lies outside the grid");
      }
      std::optional<int> plane;
      if (options.by_plane) plane = r.target_plane.value_or(0);
      PositionMatrix& m = matrix_for(plane);
      const std::size_t i = static_cast<std::size_t>(c.row * options.cols + c.col);
      ++m.targets[i];
      if (r.answer_yes) ++m.hits[i];
    }
  }
  std::vector<PositionMatrix> result;
  for (auto& [plane, m] : out) result.push_back(std::move(m));
  return result;
}

std::vector<QuestionnaireSummary> tlx_aggregate(const std::vector<QuestionnaireRecord>& records) {
  std::map<std::tuple<std::string, QuestionnaireKind>, std::vector<const QuestionnaireRecord*>> groups;
  for (const QuestionnaireRecord& q : records) {
    q.check();
    groups[{q.block_label, q.kind}].push_back(&q);
  }
  std::vector<QuestionnaireSummary> out;
  for (const auto& [key, members] : groups) {
    QuestionnaireSummary s;
    s.block_label = std::get<0>(key);
    s.kind = std::get<1>(key);
    s.n = members.size();
    const std::size_t items = s.kind == QuestionnaireKind::nasa_tlx ? 6 : 2;
    for (std::size_t i = 0; i < items; ++i) {
      std::vector<double> values;
      for (const QuestionnaireRecord* q : members) {
        values.push_back(s.kind == QuestionnaireKind::nasa_tlx ? q->tlx[i] : q->custom[i]);
      }
      s.items.push_back(describe(values));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<QuestionnaireSummary> tlx_aggregate(const std::vector<SessionLog>& logs) {
  std::vector<QuestionnaireRecord> all;
  for (const SessionLog& log : logs) all.insert(all.end(), log.questionnaires.begin(), log.questionnaires.end());
  return tlx_aggregate(all);
}

}  // namespace deadeye
