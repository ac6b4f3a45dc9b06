#include "deadeye/runner/session.hpp"

#include <algorithm>
#include <sstream>

#include "deadeye/core/error.hpp"
#include "deadeye/core/parallel.hpp"
#include "deadeye/core/rng.hpp"
#include "deadeye/scene/generator.hpp"

namespace deadeye {

const char* to_string(BlockKind kind) {
  switch (kind) {
    case BlockKind::briefing: return "briefing";
    case BlockKind::training: return "training";
    case BlockKind::trial_block: return "trial_block";
    case BlockKind::pause: return "pause";
    case BlockKind::questionnaire: return "questionnaire";
  }
  return "unknown";
}

const char* to_string(QuestionnaireKind kind) { return kind == QuestionnaireKind::nasa_tlx ? "nasa_tlx" : "custom"; }

BlockKind block_kind_from_string(const std::string& text) {
  for (BlockKind k : {BlockKind::briefing, BlockKind::training, BlockKind::trial_block, BlockKind::pause,
                      BlockKind::questionnaire}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::format, "unknown block kind '" + text + "'");
}

QuestionnaireKind questionnaire_kind_from_string(const std::string& text) {
  if (text == "nasa_tlx") return QuestionnaireKind::nasa_tlx;
  if (text == "custom") return QuestionnaireKind::custom;
  throw Error(ErrorKind::format, "unknown questionnaire kind '" + text + "'");
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::briefing: return "briefing";
    case Phase::crosshair: return "crosshair";
    case Phase::stimulus: return "stimulus";
    case Phase::awaiting_response: return "awaiting_response";
    case Phase::feedback: return "feedback";
    case Phase::pause: return "pause";
    case Phase::questionnaire: return "questionnaire";
    case Phase::finished: return "finished";
  }
  return "unknown";
}

Phase phase_from_string(const std::string& text) {
  for (Phase p : {Phase::briefing, Phase::crosshair, Phase::stimulus, Phase::awaiting_response, Phase::feedback,
                  Phase::pause, Phase::questionnaire, Phase::finished}) {
    if (text == to_string(p)) return p;
  }
  throw Error(ErrorKind::format, "unknown phase '" + text + "'");
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::tick: return "tick";
    case EventKind::response: return "response";
    case EventKind::ui_ready: return "ui_ready";
    case EventKind::skip_requested: return "skip_requested";
    case EventKind::questionnaire: return "questionnaire";
  }
  return "unknown";
}

EventKind event_kind_from_string(const std::string& text) {
  for (EventKind k : {EventKind::tick, EventKind::response, EventKind::ui_ready, EventKind::skip_requested,
                      EventKind::questionnaire}) {
    if (text == to_string(k)) return k;
  }
  throw Error(ErrorKind::format, "unknown event kind '" + text + "'");
}

const char* to_string(EffectKind kind) {
  switch (kind) {
    case EffectKind::show_briefing: return "show_briefing";
    case EffectKind::show_crosshair: return "show_crosshair";
    case EffectKind::preload_frames: return "preload_frames";
    case EffectKind::present_stimulus: return "present_stimulus";
    case EffectKind::prompt_response: return "prompt_response";
    case EffectKind::feedback: return "feedback";
    case EffectKind::neutral_sound: return "neutral_sound";
    case EffectKind::show_pause: return "show_pause";
    case EffectKind::show_questionnaire: return "show_questionnaire";
    case EffectKind::session_complete: return "session_complete";
  }
  return "unknown";
}

void QuestionnaireRecord::check() const {
  if (kind == QuestionnaireKind::nasa_tlx) {
    for (int i = 0; i < 6; ++i) {
      if (tlx[i] < 0 || tlx[i] > 100 || tlx[i] % 5 != 0) {
        throw Error(ErrorKind::domain, std::string("TLX ") + kTlxScales[i] + " must be a multiple of 5 in [0, 100], got " +
                                           std::to_string(tlx[i]));
      }
    }
  } else {
    for (int i = 0; i < 2; ++i) {
      if (custom[i] < 0 || custom[i] > 6) {
        throw Error(ErrorKind::domain,
                    std::string(kCustomItems[i]) + " must be an integer in [0, 6], got " + std::to_string(custom[i]));
      }
    }
  }
}

SessionPlan build_default_plan(const std::string& participant_id, std::uint64_t seed, Highlight technique) {
  SessionPlan plan;
  plan.participant_id = participant_id;
  plan.rng_seed = seed;
  plan.technique = technique;

  std::vector<SetKind> exp2 = {SetKind::depth2, SetKind::depth2_color_shape, SetKind::depth3_color};
  Rng order(derive_seed(seed, "exp2-order"));
  order.shuffle(std::span<SetKind>(exp2));
  std::vector<SetKind> sets = {SetKind::exp1_4, SetKind::exp1_16, SetKind::exp1_30};
  sets.insert(sets.end(), exp2.begin(), exp2.end());

  const SetConfig defaults;
  plan.blocks.push_back({BlockKind::briefing, {}, 0, 0, {}, "briefing"});
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::uint64_t set_seed = derive_seed(seed, "set", i);
    const std::string name = to_string(sets[i]);
    plan.blocks.push_back({BlockKind::training, sets[i], set_seed, 0, {}, name});
    plan.blocks.push_back({BlockKind::trial_block, sets[i], set_seed, 0, {}, name});
    if (i == 2 || i == 5) {
      plan.blocks.push_back({BlockKind::questionnaire, {}, 0, 0,
                             {QuestionnaireKind::nasa_tlx, QuestionnaireKind::custom}, i == 2 ? "exp1" : "exp2"});
    }
    if (i + 1 < sets.size()) plan.blocks.push_back({BlockKind::pause, {}, 0, defaults.pause_s, {}, "pause"});
  }
  return plan;
}

SetConfig block_config(const SessionPlan& plan, const Block& block) {
  SetConfig c = SetConfig::for_kind(block.set_kind, block.set_seed);
  c.technique = plan.technique;
  return block.kind == BlockKind::training ? training_config(c) : c;
}

const TrialScene* SessionMaterial::find_scene(const std::string& scene_id) const {
  for (const auto& scenes : block_scenes) {
    for (const TrialScene& s : scenes) {
      if (s.scene_id == scene_id) return &s;
    }
  }
  return nullptr;
}

std::shared_ptr<const SessionMaterial> prepare_material(const SessionPlan& plan, unsigned threads) {
  auto m = std::make_shared<SessionMaterial>();
  m->plan = plan;
  m->block_scenes.resize(plan.blocks.size());
  m->block_configs.resize(plan.blocks.size());
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    const Block& b = plan.blocks[i];
    if (b.kind != BlockKind::training && b.kind != BlockKind::trial_block) continue;
    m->block_configs[i] = block_config(plan, b);
    m->block_scenes[i] = generate_set(m->block_configs[i], threads);
    // Training scene ids carry a prefix so pools stay distinguishable.
    if (b.kind == BlockKind::training) {
      for (TrialScene& s : m->block_scenes[i]) s.scene_id = "train-" + s.scene_id;
    }
  }
  return m;
}

Session::Session(std::shared_ptr<const SessionMaterial> material, std::int64_t start_ms)
    : material_(std::move(material)) {
  if (!material_ || material_->plan.blocks.empty()) throw Error(ErrorKind::configuration, "session plan has no blocks");
  log_.plan = material_->plan;
  log_.start_ms = start_ms;
  state_.phase_start_ms = start_ms;
  state_.last_event_ms = start_ms;
  std::vector<Effect> ignored;
  enter_block(start_ms, ignored);
}

const TrialScene* Session::current_scene() const {
  if (state_.phase == Phase::finished) return nullptr;
  const auto& scenes = material_->block_scenes[static_cast<std::size_t>(state_.block)];
  if (scenes.empty() || state_.trial >= static_cast<int>(scenes.size())) return nullptr;
  return &scenes[static_cast<std::size_t>(state_.trial)];
}

std::string Session::describe_state() const {
  std::ostringstream out;
  out << "phase=" << to_string(state_.phase) << " block=" << state_.block << " trial=" << state_.trial
      << " last_event_ms=" << state_.last_event_ms;
  if (state_.phase == Phase::crosshair || state_.phase == Phase::stimulus || state_.phase == Phase::pause) {
    out << " deadline_ms=" << state_.phase_deadline_ms;
  }
  return out.str();
}

void Session::check_legal(const Event& e) const {
  auto reject = [&](const std::string& why) {
    throw Error(ErrorKind::protocol, why + " [" + describe_state() + "]");
  };
  if (e.now_ms < state_.last_event_ms) reject("event time goes backwards");
  const Phase p = state_.phase;
  switch (e.kind) {
    case EventKind::tick: break;
    case EventKind::response:
      if (!e.answer_yes) reject("response without an answer");
      if (p != Phase::stimulus && p != Phase::awaiting_response) reject("response not accepted in this phase");
      break;
    case EventKind::ui_ready:
      if (p != Phase::briefing && p != Phase::feedback) reject("ui_ready not accepted in this phase");
      break;
    case EventKind::skip_requested:
      if (p != Phase::briefing && p != Phase::pause) reject("skip not accepted in this phase");
      break;
    case EventKind::questionnaire: {
      if (p != Phase::questionnaire) reject("questionnaire not accepted in this phase");
      if (!e.questionnaire) reject("questionnaire event without a record");
      const QuestionnaireKind want = block().questionnaires[state_.questionnaire_step];
      if (e.questionnaire->kind != want) reject(std::string("expected questionnaire ") + to_string(want));
      e.questionnaire->check();
      break;
    }
  }
}

void Session::set_phase(Phase phase, std::int64_t now) {
  log_.transitions.push_back({now, state_.block, state_.trial, state_.phase, phase});
  state_.phase = phase;
  state_.phase_start_ms = now;
}

void Session::enter_block(std::int64_t now, std::vector<Effect>& effects) {
  if (state_.block >= static_cast<int>(material_->plan.blocks.size())) {
    set_phase(Phase::finished, now);
    effects.push_back({EffectKind::session_complete, 0, {}, Highlight::none, {}, {}, state_.block, 0});
    return;
  }
  const Block& b = block();
  state_.trial = 0;
  state_.questionnaire_step = 0;
  switch (b.kind) {
    case BlockKind::briefing:
      set_phase(Phase::briefing, now);
      effects.push_back({EffectKind::show_briefing, 0, {}, material_->plan.technique, {}, {}, state_.block});
      break;
    case BlockKind::training:
    case BlockKind::trial_block:
      if (material_->block_scenes[static_cast<std::size_t>(state_.block)].empty()) {
        next_block(now, effects);
      } else {
        start_trial(now, effects);
      }
      break;
    case BlockKind::pause:
      set_phase(Phase::pause, now);
      state_.phase_deadline_ms = now + static_cast<std::int64_t>(b.pause_s) * 1000;
      effects.push_back({EffectKind::show_pause, b.pause_s * 1000LL, {}, Highlight::none, {}, {}, state_.block});
      break;
    case BlockKind::questionnaire:
      if (b.questionnaires.empty()) {
        next_block(now, effects);
        break;
      }
      set_phase(Phase::questionnaire, now);
      effects.push_back(
          {EffectKind::show_questionnaire, 0, {}, Highlight::none, {}, b.questionnaires.front(), state_.block});
      break;
  }
}

void Session::start_trial(std::int64_t now, std::vector<Effect>& effects) {
  const SetConfig& cfg = material_->block_configs[static_cast<std::size_t>(state_.block)];
  set_phase(Phase::crosshair, now);
  state_.phase_deadline_ms = now + cfg.crosshair_ms;
  const TrialScene& scene = *current_scene();
  effects.push_back({EffectKind::show_crosshair, cfg.crosshair_ms, {}, Highlight::none, {}, {}, state_.block, state_.trial});
  effects.push_back({EffectKind::preload_frames, 0, scene.scene_id, scene.highlight, {}, {}, state_.block, state_.trial});
}

void Session::next_trial(std::int64_t now, std::vector<Effect>& effects) {
  ++state_.trial;
  if (state_.trial < static_cast<int>(material_->block_scenes[static_cast<std::size_t>(state_.block)].size())) {
    start_trial(now, effects);
  } else {
    next_block(now, effects);
  }
}

void Session::next_block(std::int64_t now, std::vector<Effect>& effects) {
  ++state_.block;
  enter_block(now, effects);
}

std::vector<Effect> Session::advance(const Event& e) {
  check_legal(e);
  std::vector<Effect> effects;
  const std::int64_t now = e.now_ms;
  log_.events.push_back(e);
  state_.last_event_ms = now;
  const bool training = state_.phase != Phase::finished && block().kind == BlockKind::training;

  switch (e.kind) {
    case EventKind::tick:
      if (state_.phase == Phase::crosshair && now >= state_.phase_deadline_ms) {
        const SetConfig& cfg = material_->block_configs[static_cast<std::size_t>(state_.block)];
        set_phase(Phase::stimulus, now);
        state_.stimulus_onset_ms = now;
        state_.phase_deadline_ms = now + cfg.exposure_ms;
        const TrialScene& scene = *current_scene();
        effects.push_back({EffectKind::present_stimulus, cfg.exposure_ms, scene.scene_id, scene.highlight, {}, {},
                           state_.block, state_.trial});
      } else if (state_.phase == Phase::stimulus && now >= state_.phase_deadline_ms) {
        set_phase(Phase::awaiting_response, now);
        effects.push_back({EffectKind::prompt_response, 0, current_scene()->scene_id, Highlight::none, {}, {},
                           state_.block, state_.trial});
      } else if (state_.phase == Phase::pause && now >= state_.phase_deadline_ms) {
        next_block(now, effects);
      }
      break;
    case EventKind::response: {
      const TrialScene& scene = *current_scene();
      ResponseRecord r;
      r.scene_id = scene.scene_id;
      r.answer_yes = *e.answer_yes;
      r.target_present = scene.has_target();
      r.correct = r.answer_yes == r.target_present;
      r.latency_ms = now - state_.stimulus_onset_ms;
      r.block_id = state_.block;
      r.trial_index = state_.trial;
      r.timestamp_ms = now;
      r.set_kind = scene.set_kind;
      r.training = training;
      if (scene.target_index) {
        const SceneObject& t = scene.objects[*scene.target_index];
        r.target_cell = t.grid_cell;
        r.target_plane = t.depth_plane;
      }
      log_.responses.push_back(r);
      if (training) {
        set_phase(Phase::feedback, now);
        effects.push_back({EffectKind::feedback, 0, scene.scene_id, Highlight::none, r.correct, {}, state_.block,
                           state_.trial});
      } else {
        effects.push_back({EffectKind::neutral_sound, 0, scene.scene_id, Highlight::none, {}, {}, state_.block,
                           state_.trial});
        next_trial(now, effects);
      }
      break;
    }
    case EventKind::ui_ready:
      if (state_.phase == Phase::briefing) {
        next_block(now, effects);
      } else {
        next_trial(now, effects);
      }
      break;
    case EventKind::skip_requested: next_block(now, effects); break;
    case EventKind::questionnaire: {
      QuestionnaireRecord q = *e.questionnaire;
      q.block_label = block().label;
      q.timestamp_ms = now;
      log_.questionnaires.push_back(q);
      ++state_.questionnaire_step;
      if (state_.questionnaire_step < block().questionnaires.size()) {
        effects.push_back({EffectKind::show_questionnaire, 0, {}, Highlight::none, {},
                           block().questionnaires[state_.questionnaire_step], state_.block});
      } else {
        next_block(now, effects);
      }
      break;
    }
  }
  return effects;
}

std::vector<Effect> Session::current_effects() const {
  std::vector<Effect> effects;
  const TrialScene* scene = current_scene();
  switch (state_.phase) {
    case Phase::briefing: effects.push_back({EffectKind::show_briefing, 0, {}, material_->plan.technique, {}, {}, state_.block}); break;
    case Phase::crosshair:
      effects.push_back({EffectKind::show_crosshair, state_.phase_deadline_ms - state_.last_event_ms, {}, Highlight::none,
                         {}, {}, state_.block, state_.trial});
      effects.push_back({EffectKind::preload_frames, 0, scene->scene_id, scene->highlight, {}, {}, state_.block, state_.trial});
      break;
    case Phase::stimulus:
      effects.push_back({EffectKind::present_stimulus, state_.phase_deadline_ms - state_.last_event_ms, scene->scene_id,
                         scene->highlight, {}, {}, state_.block, state_.trial});
      break;
    case Phase::awaiting_response:
      effects.push_back({EffectKind::prompt_response, 0, scene->scene_id, Highlight::none, {}, {}, state_.block, state_.trial});
      break;
    case Phase::feedback:
      effects.push_back({EffectKind::feedback, 0, scene->scene_id, Highlight::none, log_.responses.back().correct, {},
                         state_.block, state_.trial});
      break;
    case Phase::pause:
      effects.push_back({EffectKind::show_pause, state_.phase_deadline_ms - state_.last_event_ms, {}, Highlight::none, {},
                         {}, state_.block});
      break;
    case Phase::questionnaire:
      effects.push_back({EffectKind::show_questionnaire, 0, {}, Highlight::none, {},
                         block().questionnaires[state_.questionnaire_step], state_.block});
      break;
    case Phase::finished: effects.push_back({EffectKind::session_complete, 0, {}, Highlight::none, {}, {}, state_.block, 0}); break;
  }
  return effects;
}

std::pair<Session, std::vector<Effect>> advance(const Session& session, const Event& event) {
  Session next = session;
  auto effects = next.advance(event);
  return {std::move(next), std::move(effects)};
}

Session replay(std::shared_ptr<const SessionMaterial> material, std::int64_t start_ms, const std::vector<Event>& events) {
  Session s(std::move(material), start_ms);
  for (const Event& e : events) s.advance(e);
  return s;
}

QuestionnaireRecord scripted_questionnaire(QuestionnaireKind kind, const std::string& label, std::int64_t now,
                                           std::uint64_t seed) {
  Rng rng(derive_seed(seed, "questionnaire"));
  QuestionnaireRecord q;
  q.kind = kind;
  q.block_label = label;
  q.timestamp_ms = now;
  for (int& v : q.tlx) v = kind == QuestionnaireKind::nasa_tlx ? static_cast<int>(rng.below(21)) * 5 : 0;
  for (int& v : q.custom) v = kind == QuestionnaireKind::custom ? static_cast<int>(rng.below(7)) : 0;
  return q;
}

}  // namespace deadeye
