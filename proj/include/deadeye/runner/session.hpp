#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "deadeye/scene/scene.hpp"

namespace deadeye {

enum class BlockKind { briefing, training, trial_block, pause, questionnaire };
enum class QuestionnaireKind { nasa_tlx, custom };

const char* to_string(BlockKind kind);
const char* to_string(QuestionnaireKind kind);
BlockKind block_kind_from_string(const std::string& text);
QuestionnaireKind questionnaire_kind_from_string(const std::string& text);

struct Block {
  BlockKind kind = BlockKind::briefing;
  SetKind set_kind = SetKind::exp1_4;  // training and trial blocks
  std::uint64_t set_seed = 0;          // training and trial blocks
  int pause_s = 0;                     // pause blocks
  std::vector<QuestionnaireKind> questionnaires;  // questionnaire blocks, answered in order
  std::string label;                   // e.g. "exp1", "exp2" for questionnaires

  bool operator==(const Block&) const = default;
};

struct SessionPlan {
  std::string participant_id;
  std::uint64_t rng_seed = 0;
  Highlight technique = Highlight::deadeye_right;
  std::vector<Block> blocks;

  bool operator==(const SessionPlan&) const = default;
};

/// Briefing, then six sets (Exp-1 ascending 4/16/30, Exp-2 shuffled), each a
/// 20-scene training block followed by a 48-scene scored block. Pauses sit
/// between consecutive sets; questionnaires follow the third and sixth sets.
SessionPlan build_default_plan(const std::string& participant_id, std::uint64_t seed,
                               Highlight technique = Highlight::deadeye_right);

/// Config used to generate a training or trial block's scenes.
SetConfig block_config(const SessionPlan& plan, const Block& block);

struct QuestionnaireRecord {
  QuestionnaireKind kind = QuestionnaireKind::nasa_tlx;
  /// nasa_tlx: mental, physical, temporal, performance, effort, frustration.
  std::array<int, 6> tlx{};
  /// custom: clearness, decision_making.
  std::array<int, 2> custom{};
  std::string block_label;
  std::int64_t timestamp_ms = 0;

  /// Throws a domain error unless TLX values are multiples of 5 in [0, 100]
  /// and custom items are integers in [0, 6].
  void check() const;
  bool operator==(const QuestionnaireRecord&) const = default;
};

inline constexpr const char* kTlxScales[6] = {"mental", "physical", "temporal", "performance", "effort", "frustration"};
inline constexpr const char* kCustomItems[2] = {"clearness", "decision_making"};

struct ResponseRecord {
  std::string scene_id;
  bool answer_yes = false;
  bool target_present = false;
  bool correct = false;
  std::int64_t latency_ms = 0;  // from stimulus onset
  int block_id = 0;
  int trial_index = 0;
  std::int64_t timestamp_ms = 0;
  SetKind set_kind = SetKind::exp1_4;
  bool training = false;
  std::optional<GridCell> target_cell;
  std::optional<int> target_plane;

  bool false_negative() const { return target_present && !answer_yes; }
  bool false_positive() const { return !target_present && answer_yes; }
  bool operator==(const ResponseRecord&) const = default;
};

enum class Phase { briefing, crosshair, stimulus, awaiting_response, feedback, pause, questionnaire, finished };

const char* to_string(Phase phase);
Phase phase_from_string(const std::string& text);

enum class EventKind { tick, response, ui_ready, skip_requested, questionnaire };

const char* to_string(EventKind kind);
EventKind event_kind_from_string(const std::string& text);

struct Event {
  EventKind kind = EventKind::tick;
  std::int64_t now_ms = 0;
  std::optional<bool> answer_yes;                   // response
  std::optional<QuestionnaireRecord> questionnaire;  // questionnaire

  static Event tick(std::int64_t now) { return {EventKind::tick, now, {}, {}}; }
  static Event response(std::int64_t now, bool yes) { return {EventKind::response, now, yes, {}}; }
  static Event ui_ready(std::int64_t now) { return {EventKind::ui_ready, now, {}, {}}; }
  static Event skip(std::int64_t now) { return {EventKind::skip_requested, now, {}, {}}; }
  static Event submit(std::int64_t now, QuestionnaireRecord record) {
    return {EventKind::questionnaire, now, {}, std::move(record)};
  }
  bool operator==(const Event&) const = default;
};

enum class EffectKind {
  show_briefing,
  show_crosshair,
  preload_frames,
  present_stimulus,
  prompt_response,
  feedback,
  neutral_sound,
  show_pause,
  show_questionnaire,
  session_complete
};

const char* to_string(EffectKind kind);

/// Declarative instruction for the UI.
struct Effect {
  EffectKind kind = EffectKind::show_briefing;
  std::int64_t duration_ms = 0;
  std::string scene_id;
  Highlight technique = Highlight::none;
  std::optional<bool> correct;
  std::optional<QuestionnaireKind> questionnaire;
  int block = 0;
  int trial = 0;

  bool operator==(const Effect&) const = default;
};

struct Transition {
  std::int64_t timestamp_ms = 0;
  int block = 0;
  int trial = 0;
  Phase from = Phase::briefing;
  Phase to = Phase::briefing;
  bool operator==(const Transition&) const = default;
};

/// Append-only record of a session. `events` is the accepted input trace;
/// everything else is derived from it.
struct SessionLog {
  SessionPlan plan;
  std::int64_t start_ms = 0;
  std::vector<Event> events;
  std::vector<Transition> transitions;
  std::vector<ResponseRecord> responses;
  std::vector<QuestionnaireRecord> questionnaires;

  bool empty() const { return events.empty() && transitions.empty() && responses.empty() && questionnaires.empty(); }
  bool operator==(const SessionLog&) const = default;
};

/// Scenes for every training and trial block of a plan (empty for other blocks).
struct SessionMaterial {
  SessionPlan plan;
  std::vector<std::vector<TrialScene>> block_scenes;
  std::vector<SetConfig> block_configs;

  const TrialScene* find_scene(const std::string& scene_id) const;
};

std::shared_ptr<const SessionMaterial> prepare_material(const SessionPlan& plan, unsigned threads = 1);

struct SessionState {
  int block = 0;
  int trial = 0;
  Phase phase = Phase::briefing;
  std::int64_t phase_start_ms = 0;
  std::int64_t phase_deadline_ms = 0;  // crosshair, stimulus, pause
  std::int64_t last_event_ms = 0;
  std::int64_t stimulus_onset_ms = 0;
  std::size_t questionnaire_step = 0;

  bool operator==(const SessionState&) const = default;
};

/// Trial-sequencing state machine. All time comes from the events; the wall
/// clock is never read.
class Session {
 public:
  Session(std::shared_ptr<const SessionMaterial> material, std::int64_t start_ms);

  /// Applies an event. Illegal events throw a protocol error that echoes the
  /// current state and leave the session untouched.
  std::vector<Effect> advance(const Event& event);

  /// Effects that re-establish the current phase on a fresh UI.
  std::vector<Effect> current_effects() const;

  const SessionState& state() const { return state_; }
  const SessionLog& log() const { return log_; }
  const SessionMaterial& material() const { return *material_; }
  std::shared_ptr<const SessionMaterial> material_ptr() const { return material_; }
  const TrialScene* current_scene() const;
  std::string describe_state() const;

 private:
  void check_legal(const Event& event) const;
  void enter_block(std::int64_t now, std::vector<Effect>& effects);
  void start_trial(std::int64_t now, std::vector<Effect>& effects);
  void next_trial(std::int64_t now, std::vector<Effect>& effects);
  void next_block(std::int64_t now, std::vector<Effect>& effects);
  void set_phase(Phase phase, std::int64_t now);
  const Block& block() const { return material_->plan.blocks[static_cast<std::size_t>(state_.block)]; }

  std::shared_ptr<const SessionMaterial> material_;
  SessionState state_;
  SessionLog log_;
};

/// Pure form of Session::advance.
std::pair<Session, std::vector<Effect>> advance(const Session& session, const Event& event);

/// Rebuilds a session from a plan and an event trace.
Session replay(std::shared_ptr<const SessionMaterial> material, std::int64_t start_ms, const std::vector<Event>& events);

/// Drives a session to completion with a scripted participant. `answer`
/// receives the scene and returns yes/no. Timed phases are ticked at their
/// deadlines, the stimulus window in `tick_ms` steps; responses arrive
/// `response_delay_ms` after stimulus onset.
struct SimulationOptions {
  std::int64_t tick_ms = 10;
  std::int64_t response_delay_ms = 600;
  std::int64_t feedback_ms = 300;
};

template <class Answer>
void simulate(Session& session, Answer&& answer, const SimulationOptions& options = {});

/// Default questionnaire answers used by scripted participants.
QuestionnaireRecord scripted_questionnaire(QuestionnaireKind kind, const std::string& label, std::int64_t now,
                                           std::uint64_t seed);

// ---- template implementation ----

template <class Answer>
void simulate(Session& session, Answer&& answer, const SimulationOptions& options) {
  std::int64_t now = session.state().last_event_ms;
  std::uint64_t questionnaire_seed = 0;
  while (session.state().phase != Phase::finished) {
    const SessionState s = session.state();
    switch (s.phase) {
      case Phase::briefing: session.advance(Event::ui_ready(now)); break;
      case Phase::crosshair:
      case Phase::pause:
        now = std::max(now, s.phase_deadline_ms);
        session.advance(Event::tick(now));
        break;
      case Phase::stimulus:
      case Phase::awaiting_response:
        if (now - s.stimulus_onset_ms >= options.response_delay_ms) {
          session.advance(Event::response(now, answer(*session.current_scene())));
        } else {
          now += options.tick_ms;
          session.advance(Event::tick(now));
        }
        break;
      case Phase::feedback:
        now += options.feedback_ms;
        session.advance(Event::ui_ready(now));
        break;
      case Phase::questionnaire: {
        const Block& b = session.material().plan.blocks[static_cast<std::size_t>(s.block)];
        const QuestionnaireKind kind = b.questionnaires[s.questionnaire_step];
        now += options.tick_ms;
        const std::uint64_t seed = session.material().plan.rng_seed + (++questionnaire_seed);
        session.advance(Event::submit(now, scripted_questionnaire(kind, b.label, now, seed)));
        break;
      }
      case Phase::finished: break;
    }
  }
}

}  // namespace deadeye
