#include "deadeye/runner/codec.hpp"

#include "deadeye/core/error.hpp"

namespace deadeye::codec {

json seed_json(std::uint64_t seed) { return std::to_string(seed); }

std::uint64_t seed_from(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  const std::string text = j.get<std::string>();
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || text[0] == '-') throw Error(ErrorKind::format, "bad seed '" + text + "'");
  return v;
}

json to_json(const Block& b) {
  json j = {{"kind", to_string(b.kind)}, {"label", b.label}};
  if (b.kind == BlockKind::training || b.kind == BlockKind::trial_block) {
    j["set_kind"] = to_string(b.set_kind);
    j["set_seed"] = seed_json(b.set_seed);
  }
  if (b.kind == BlockKind::pause) j["pause_s"] = b.pause_s;
  if (b.kind == BlockKind::questionnaire) {
    json q = json::array();
    for (QuestionnaireKind k : b.questionnaires) q.push_back(to_string(k));
    j["questionnaires"] = q;
  }
  return j;
}

Block block_from(const json& j) {
  Block b;
  b.kind = block_kind_from_string(j.at("kind").get<std::string>());
  b.label = j.at("label").get<std::string>();
  if (b.kind == BlockKind::training || b.kind == BlockKind::trial_block) {
    b.set_kind = set_kind_from_string(j.at("set_kind").get<std::string>());
    b.set_seed = seed_from(j.at("set_seed"));
  }
  if (b.kind == BlockKind::pause) b.pause_s = j.at("pause_s").get<int>();
  if (b.kind == BlockKind::questionnaire) {
    for (const json& q : j.at("questionnaires")) b.questionnaires.push_back(questionnaire_kind_from_string(q.get<std::string>()));
  }
  return b;
}

json to_json(const SessionPlan& p) {
  json blocks = json::array();
  for (const Block& b : p.blocks) blocks.push_back(to_json(b));
  return {{"participant_id", p.participant_id},
          {"rng_seed", seed_json(p.rng_seed)},
          {"technique", to_string(p.technique)},
          {"exp1_order", "fixed_ascending"},
          {"blocks", blocks}};
}

SessionPlan plan_from(const json& j) {
  SessionPlan p;
  p.participant_id = j.at("participant_id").get<std::string>();
  p.rng_seed = seed_from(j.at("rng_seed"));
  p.technique = highlight_from_string(j.at("technique").get<std::string>());
  for (const json& b : j.at("blocks")) p.blocks.push_back(block_from(b));
  return p;
}

json to_json(const QuestionnaireRecord& q) {
  json j = {{"kind", to_string(q.kind)}, {"block_label", q.block_label}, {"timestamp_ms", q.timestamp_ms}};
  if (q.kind == QuestionnaireKind::nasa_tlx) {
    for (int i = 0; i < 6; ++i) j[kTlxScales[i]] = q.tlx[i];
  } else {
    for (int i = 0; i < 2; ++i) j[kCustomItems[i]] = q.custom[i];
  }
  return j;
}

QuestionnaireRecord questionnaire_from(const json& j) {
  QuestionnaireRecord q;
  q.kind = questionnaire_kind_from_string(j.at("kind").get<std::string>());
  q.block_label = j.value("block_label", std::string());
  q.timestamp_ms = j.value("timestamp_ms", std::int64_t{0});
  if (q.kind == QuestionnaireKind::nasa_tlx) {
    for (int i = 0; i < 6; ++i) q.tlx[i] = j.at(kTlxScales[i]).get<int>();
  } else {
    for (int i = 0; i < 2; ++i) q.custom[i] = j.at(kCustomItems[i]).get<int>();
  }
  q.check();
  return q;
}

json to_json(const ResponseRecord& r) {
  json j = {{"scene_id", r.scene_id},
            {"answer", r.answer_yes ? "yes" : "no"},
            {"target_present", r.target_present},
            {"correct", r.correct},
            {"latency_ms", r.latency_ms},
            {"block_id", r.block_id},
            {"trial_index", r.trial_index},
            {"timestamp_ms", r.timestamp_ms},
            {"set_kind", to_string(r.set_kind)},
            {"training", r.training}};
  j["target_cell"] = r.target_cell ? json::array({r.target_cell->row, r.target_cell->col}) : json(nullptr);
  j["target_plane"] = r.target_plane ? json(*r.target_plane) : json(nullptr);
  return j;
}

ResponseRecord response_from(const json& j) {
  ResponseRecord r;
  r.scene_id = j.at("scene_id").get<std::string>();
  const std::string answer = j.at("answer").get<std::string>();
  if (answer != "yes" && answer != "no") throw Error(ErrorKind::format, "answer must be yes or no");
  r.answer_yes = answer == "yes";
  r.target_present = j.at("target_present").get<bool>();
  r.correct = j.at("correct").get<bool>();
  if (r.correct != (r.answer_yes == r.target_present)) throw Error(ErrorKind::format, "response correctness inconsistent");
  r.latency_ms = j.at("latency_ms").get<std::int64_t>();
  r.block_id = j.at("block_id").get<int>();
  r.trial_index = j.at("trial_index").get<int>();
  r.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
  r.set_kind = set_kind_from_string(j.at("set_kind").get<std::string>());
  r.training = j.at("training").get<bool>();
  if (!j.at("target_cell").is_null()) r.target_cell = GridCell{j["target_cell"].at(0).get<int>(), j["target_cell"].at(1).get<int>()};
  if (!j.at("target_plane").is_null()) r.target_plane = j["target_plane"].get<int>();
  return r;
}

json to_json(const Event& e) {
  json j = {{"kind", to_string(e.kind)}, {"now_ms", e.now_ms}};
  if (e.answer_yes) j["answer"] = *e.answer_yes ? "yes" : "no";
  if (e.questionnaire) j["questionnaire"] = to_json(*e.questionnaire);
  return j;
}

Event event_from(const json& j) {
  Event e;
  e.kind = event_kind_from_string(j.at("kind").get<std::string>());
  e.now_ms = j.at("now_ms").get<std::int64_t>();
  if (j.contains("answer")) {
    const std::string a = j["answer"].get<std::string>();
    if (a != "yes" && a != "no") throw Error(ErrorKind::format, "answer must be yes or no");
    e.answer_yes = a == "yes";
  }
  if (j.contains("questionnaire")) e.questionnaire = questionnaire_from(j["questionnaire"]);
  return e;
}

json to_json(const Transition& t) {
  return {{"timestamp_ms", t.timestamp_ms},
          {"block", t.block},
          {"trial", t.trial},
          {"from", to_string(t.from)},
          {"to", to_string(t.to)}};
}

Transition transition_from(const json& j) {
  return {j.at("timestamp_ms").get<std::int64_t>(), j.at("block").get<int>(), j.at("trial").get<int>(),
          phase_from_string(j.at("from").get<std::string>()), phase_from_string(j.at("to").get<std::string>())};
}

json to_json(const Effect& e) {
  json j = {{"kind", to_string(e.kind)}, {"block", e.block}};
  if (e.duration_ms) j["duration_ms"] = e.duration_ms;
  if (!e.scene_id.empty()) {
    j["scene_id"] = e.scene_id;
    j["trial"] = e.trial;
  }
  if (e.kind == EffectKind::present_stimulus || e.kind == EffectKind::preload_frames ||
      e.kind == EffectKind::show_briefing) {
    j["technique"] = to_string(e.technique);
  }
  if (e.correct) j["correct"] = *e.correct;
  if (e.questionnaire) j["questionnaire"] = to_string(*e.questionnaire);
  return j;
}

json to_json(const SessionState& s) {
  return {{"block", s.block},
          {"trial", s.trial},
          {"phase", to_string(s.phase)},
          {"phase_start_ms", s.phase_start_ms},
          {"phase_deadline_ms", s.phase_deadline_ms},
          {"last_event_ms", s.last_event_ms}};
}

}  // namespace deadeye::codec
