#include "deadeye/analysis/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace deadeye {

using nlohmann::json;

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_number(*v) : "NA"; }

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

// JSON has no infinities; encode them as strings.
json number_json(double v) { return std::isfinite(v) ? json(v) : json(format_number(v)); }

std::string set_label(const SetSummary& s) { return s.set_kind ? to_string(*s.set_kind) : "overall"; }

void counts_row(std::ostringstream& out, const std::string& set, const std::string& who, const TrialCounts& c) {
  out << set << ',' << who << ',' << c.n_trials << ',' << c.correct << ',' << c.false_negatives << ','
      << c.false_positives << ',' << format_number(c.accuracy()) << ',' << opt(c.fn_share());
}

json counts_json(const TrialCounts& c) {
  return {{"n_trials", c.n_trials},
          {"correct", c.correct},
          {"false_negatives", c.false_negatives},
          {"false_positives", c.false_positives},
          {"accuracy", c.accuracy()},
          {"fn_share", opt_json(c.fn_share())}};
}

}  // namespace

std::string summary_csv(const Summary& summary) {
  std::ostringstream out;
  out << "set,participant,n_trials,correct,false_negatives,false_positives,accuracy,fn_share,"
         "participants,mean_accuracy,sd_accuracy\n";
  auto block = [&](const SetSummary& s) {
    counts_row(out, set_label(s), "ALL", s.pooled);
    out << ',' << s.accuracy.n << ',' << format_number(s.accuracy.mean) << ',' << format_number(s.accuracy.sd) << '\n';
    for (const ParticipantAccuracy& p : s.participants) {
      counts_row(out, set_label(s), p.participant_id, p.counts);
      out << ",1," << format_number(p.counts.accuracy()) << ",NA\n";
    }
  };
  for (const SetSummary& s : summary.sets) block(s);
  block(summary.overall);
  return out.str();
}

std::string matrix_csv(const std::vector<PositionMatrix>& matrices) {
  std::ostringstream out;
  out << "plane,row,col,targets,hits,rate\n";
  for (const PositionMatrix& m : matrices) {
    for (int r = 0; r < m.rows; ++r) {
      for (int c = 0; c < m.cols; ++c) {
        const std::size_t i = static_cast<std::size_t>(r * m.cols + c);
        out << (m.depth_plane ? std::to_string(*m.depth_plane) : "all") << ',' << r << ',' << c << ',' << m.targets[i]
            << ',' << m.hits[i] << ',' << opt(m.rate(r, c)) << '\n';
      }
    }
  }
  return out.str();
}

std::string tlx_csv(const std::vector<QuestionnaireSummary>& summaries) {
  std::ostringstream out;
  out << "block,kind,item,n,mean,sd\n";
  for (const QuestionnaireSummary& s : summaries) {
    for (std::size_t i = 0; i < s.items.size(); ++i) {
      const char* item = s.kind == QuestionnaireKind::nasa_tlx ? kTlxScales[i] : kCustomItems[i];
      out << s.block_label << ',' << to_string(s.kind) << ',' << item << ',' << s.n << ','
          << format_number(s.items[i].mean) << ',' << format_number(s.items[i].sd) << '\n';
    }
  }
  return out.str();
}

std::string test_csv(const std::vector<std::pair<std::string, TestResult>>& tests) {
  std::ostringstream out;
  out << "name,kind,statistic,df1,df2,p_value,degenerate,epsilon\n";
  for (const auto& [name, r] : tests) {
    out << name << ',' << to_string(r.kind) << ',' << format_number(r.statistic) << ',' << format_number(r.df1) << ','
        << (r.kind == TestKind::rm_anova ? format_number(r.df2) : "NA") << ',' << format_number(r.p_value) << ','
        << (r.degenerate ? "true" : "false") << ',' << format_number(r.epsilon) << '\n';
  }
  return out.str();
}

json to_json(const Summary& summary) {
  auto one = [](const SetSummary& s) {
    json participants = json::array();
    for (const ParticipantAccuracy& p : s.participants) {
      json j = counts_json(p.counts);
      j["participant_id"] = p.participant_id;
      participants.push_back(j);
    }
    json j = counts_json(s.pooled);
    j["set"] = set_label(s);
    j["participants"] = participants;
    j["mean_accuracy"] = s.accuracy.mean;
    j["sd_accuracy"] = s.accuracy.sd;
    return j;
  };
  json sets = json::array();
  for (const SetSummary& s : summary.sets) sets.push_back(one(s));
  return {{"sets", sets}, {"overall", one(summary.overall)}};
}

json to_json(const PositionMatrix& m) {
  json rates = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(opt_json(m.rate(r, c)));
    rates.push_back(row);
  }
  return {{"plane", m.depth_plane ? json(*m.depth_plane) : json("all")},
          {"rows", m.rows},
          {"cols", m.cols},
          {"targets", m.targets},
          {"hits", m.hits},
          {"rates", rates}};
}

json to_json(const QuestionnaireSummary& s) {
  json items = json::object();
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    const char* item = s.kind == QuestionnaireKind::nasa_tlx ? kTlxScales[i] : kCustomItems[i];
    items[item] = {{"mean", s.items[i].mean}, {"sd", s.items[i].sd}};
  }
  return {{"block", s.block_label}, {"kind", to_string(s.kind)}, {"n", s.n}, {"items", items}};
}

json to_json(const TestResult& r) {
  json j = {{"kind", to_string(r.kind)},
            {"statistic", number_json(r.statistic)},
            {"df1", r.df1},
            {"p_value", r.p_value},
            {"degenerate", r.degenerate}};
  if (r.kind == TestKind::rm_anova) {
    j["df2"] = r.df2;
    j["corrected"] = r.corrected;
    j["epsilon"] = r.epsilon;
  }
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace deadeye
