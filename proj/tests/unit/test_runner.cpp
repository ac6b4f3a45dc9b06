#include <doctest.h>

#include <algorithm>
#include <memory>
#include <set>
#include <sstream>

#include "deadeye/core/error.hpp"
#include "deadeye/core/rng.hpp"
#include "deadeye/runner/session.hpp"
#include "deadeye/runner/session_io.hpp"

using namespace deadeye;

namespace {

const std::shared_ptr<const SessionMaterial>& material() {
  static const auto m = prepare_material(build_default_plan("p01", 4242));
  return m;
}

bool truthful(const TrialScene& s) { return s.has_target(); }

// Session advanced to the first crosshair of the first training block.
Session at_first_crosshair(std::int64_t start = 1000) {
  Session s(material(), start);
  s.advance(Event::ui_ready(start));
  return s;
}

void to_prompt(Session& s) {
  const std::int64_t t = s.state().phase_deadline_ms;
  s.advance(Event::tick(t));
  s.advance(Event::tick(t + 250));
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::contract;
}

}  // namespace

TEST_CASE("default plan structure") {
  const SessionPlan& plan = material()->plan;
  int training = 0, scored = 0, pauses = 0, questionnaires = 0;
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    const Block& b = plan.blocks[i];
    const auto n = static_cast<int>(material()->block_scenes[i].size());
    switch (b.kind) {
      case BlockKind::training: training += n; break;
      case BlockKind::trial_block:
        scored += n;
        REQUIRE(i > 0);
        CHECK(plan.blocks[i - 1].kind == BlockKind::training);
        CHECK(plan.blocks[i - 1].set_kind == b.set_kind);
        break;
      case BlockKind::pause:
        ++pauses;
        CHECK(b.pause_s == 30);
        break;
      case BlockKind::questionnaire:
        ++questionnaires;
        CHECK(b.questionnaires == std::vector{QuestionnaireKind::nasa_tlx, QuestionnaireKind::custom});
        break;
      case BlockKind::briefing: CHECK(i == 0); break;
    }
  }
  CHECK(scored == 288);
  CHECK(training == 120);
  CHECK(pauses == 5);
  CHECK(questionnaires == 2);
}

TEST_CASE("Exp-1 order is fixed and Exp-2 order depends on the seed") {
  auto sets = [](const SessionPlan& p) {
    std::vector<SetKind> out;
    for (const Block& b : p.blocks) {
      if (b.kind == BlockKind::trial_block) out.push_back(b.set_kind);
    }
    return out;
  };
  CHECK(build_default_plan("a", 1) == build_default_plan("a", 1));
  std::set<std::vector<SetKind>> exp2_orders;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto s = sets(build_default_plan("a", seed));
    REQUIRE(s.size() == 6);
    CHECK(s[0] == SetKind::exp1_4);
    CHECK(s[1] == SetKind::exp1_16);
    CHECK(s[2] == SetKind::exp1_30);
    std::vector<SetKind> exp2(s.begin() + 3, s.end());
    std::vector<SetKind> sorted = exp2;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector{SetKind::depth2, SetKind::depth2_color_shape, SetKind::depth3_color});
    exp2_orders.insert(exp2);
  }
  CHECK(exp2_orders.size() > 1);
}

TEST_CASE("training and scored pools are disjoint") {
  std::set<std::string> training, scored;
  const SessionMaterial& m = *material();
  for (std::size_t i = 0; i < m.plan.blocks.size(); ++i) {
    for (const TrialScene& s : m.block_scenes[i]) {
      (m.plan.blocks[i].kind == BlockKind::training ? training : scored).insert(s.scene_id);
    }
  }
  CHECK(training.size() == 120);
  CHECK(scored.size() == 288);
  for (const auto& id : training) CHECK(scored.count(id) == 0);
}

TEST_CASE("crosshair lasts 2500 ms and the stimulus 250 ms") {
  Session s = at_first_crosshair(1000);
  CHECK(s.state().phase == Phase::crosshair);
  CHECK(s.advance(Event::tick(1000 + 2499)).empty());
  CHECK(s.state().phase == Phase::crosshair);
  const auto fx = s.advance(Event::tick(1000 + 2500));
  CHECK(s.state().phase == Phase::stimulus);
  REQUIRE(fx.size() == 1);
  CHECK(fx[0].kind == EffectKind::present_stimulus);
  CHECK(fx[0].duration_ms == 250);
  s.advance(Event::tick(3500 + 249));
  CHECK(s.state().phase == Phase::stimulus);
  s.advance(Event::tick(3500 + 250));
  CHECK(s.state().phase == Phase::awaiting_response);
}

TEST_CASE("training feedback reports correctness") {
  Session s = at_first_crosshair();
  to_prompt(s);
  const bool present = s.current_scene()->has_target();
  const auto fx = s.advance(Event::response(s.state().last_event_ms + 400, !present));
  CHECK(s.state().phase == Phase::feedback);
  REQUIRE(fx.size() == 1);
  CHECK(fx[0].kind == EffectKind::feedback);
  CHECK(fx[0].correct == false);
  CHECK(s.log().responses.back().training);
  CHECK_FALSE(s.log().responses.back().correct);
}

TEST_CASE("yes on a non-target scored trial is a false positive") {
  Session s = at_first_crosshair();
  // Answer the training block, then reach a scored non-target trial.
  while (true) {
    REQUIRE(s.state().phase == Phase::crosshair);
    const Block& b = s.material().plan.blocks[static_cast<std::size_t>(s.state().block)];
    const TrialScene& scene = *s.current_scene();
    to_prompt(s);
    if (b.kind == BlockKind::trial_block && !scene.has_target()) {
      const auto fx = s.advance(Event::response(s.state().last_event_ms + 10, true));
      const ResponseRecord& r = s.log().responses.back();
      CHECK_FALSE(r.correct);
      CHECK(r.false_positive());
      CHECK_FALSE(r.false_negative());
      CHECK_FALSE(r.training);
      CHECK(fx.front().kind == EffectKind::neutral_sound);
      break;
    }
    s.advance(Event::response(s.state().last_event_ms + 10, scene.has_target()));
    if (s.state().phase == Phase::feedback) s.advance(Event::ui_ready(s.state().last_event_ms + 10));
  }
}

TEST_CASE("early responses during the stimulus are latency-stamped") {
  Session s = at_first_crosshair(0);
  s.advance(Event::tick(2500));
  s.advance(Event::response(2600, true));
  CHECK(s.log().responses.back().latency_ms == 100);
}

TEST_CASE("illegal events leave the session untouched") {
  Session s = at_first_crosshair();
  const SessionState state = s.state();
  const SessionLog log = s.log();
  for (const Event& e : {Event::response(state.last_event_ms + 5, true), Event::ui_ready(state.last_event_ms + 5),
                         Event::skip(state.last_event_ms + 5), Event::tick(state.last_event_ms - 1),
                         Event::submit(state.last_event_ms, QuestionnaireRecord{})}) {
    try {
      s.advance(e);
      FAIL("expected a protocol error");
    } catch (const Error& err) {
      CHECK(err.kind() == ErrorKind::protocol);
      CHECK(std::string(err.what()).find("phase=crosshair") != std::string::npos);
    }
    CHECK(s.state() == state);
    CHECK(s.log() == log);
  }
}

TEST_CASE("questionnaire values are checked") {
  QuestionnaireRecord q;
  q.tlx = {5, 10, 0, 100, 50, 95};
  CHECK_NOTHROW(q.check());
  q.tlx[2] = 7;
  CHECK(kind_of([&] { q.check(); }) == ErrorKind::domain);
  q.tlx[2] = 105;
  CHECK(kind_of([&] { q.check(); }) == ErrorKind::domain);
  QuestionnaireRecord c;
  c.kind = QuestionnaireKind::custom;
  c.custom = {0, 6};
  CHECK_NOTHROW(c.check());
  c.custom[1] = 7;
  CHECK(kind_of([&] { c.check(); }) == ErrorKind::domain);
}

TEST_CASE("a perfect participant completes the plan") {
  Session s(material(), 0);
  simulate(s, truthful);
  const SessionLog& log = s.log();
  CHECK(s.state().phase == Phase::finished);
  int scored = 0, training = 0;
  for (const ResponseRecord& r : log.responses) {
    CHECK(r.correct);
    (r.training ? training : scored)++;
  }
  CHECK(scored == 288);
  CHECK(training == 120);
  CHECK(log.questionnaires.size() == 4);

  SUBCASE("replay reproduces the log") {
    const Session again = replay(material(), 0, log.events);
    CHECK(again.log() == log);
    CHECK(again.state() == s.state());
  }
  SUBCASE("export round trip") {
    const std::string text = export_session(log);
    CHECK(import_session(text) == log);
    int responses = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) responses += line.find("\"type\":\"response\"") != std::string::npos;
    CHECK(responses == 408);
  }
  SUBCASE("timestamps are monotone") {
    for (std::size_t i = 1; i < log.events.size(); ++i) REQUIRE(log.events[i].now_ms >= log.events[i - 1].now_ms);
    for (std::size_t i = 1; i < log.transitions.size(); ++i) {
      REQUIRE(log.transitions[i].timestamp_ms >= log.transitions[i - 1].timestamp_ms);
    }
  }
}

TEST_CASE("empty session exports a header only") {
  SessionLog log;
  log.plan = material()->plan;
  const std::string text = export_session(log);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(import_session(text) == log);
}

TEST_CASE("any single-byte edit fails the checksum") {
  Session s = at_first_crosshair();
  to_prompt(s);
  s.advance(Event::response(s.state().last_event_ms + 300, true));
  const std::string text = export_session(s.log());
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::string bad = text;
    const std::size_t pos = static_cast<std::size_t>(rng.below(bad.size()));
    char c = static_cast<char>(' ' + rng.below(95));
    if (c == bad[pos]) c = c == 'x' ? 'y' : 'x';
    bad[pos] = c;
    try {
      import_session(bad);
      FAIL("edit at " << pos << " was not detected");
    } catch (const Error& e) {
      REQUIRE(e.kind() == ErrorKind::format);
      REQUIRE(std::string(e.what()).find("checksum") != std::string::npos);
    }
  }
}

TEST_CASE("no stimulus outlasts the exposure by more than a tick") {
  Rng rng(99);
  for (int run = 0; run < 3; ++run) {
    const std::int64_t quantum = 1 + static_cast<std::int64_t>(rng.below(60));
    Session s(material(), 0);
    std::int64_t now = 0;
    int trials = 0;
    while (s.state().phase != Phase::finished && trials < 150) {
      const Phase p = s.state().phase;
      if (p == Phase::briefing || p == Phase::feedback) {
        s.advance(Event::ui_ready(now));
      } else if (p == Phase::questionnaire) {
        const Block& b = s.material().plan.blocks[static_cast<std::size_t>(s.state().block)];
        s.advance(Event::submit(now, scripted_questionnaire(b.questionnaires[s.state().questionnaire_step], b.label,
                                                            now, rng.next_u64())));
      } else if ((p == Phase::stimulus || p == Phase::awaiting_response) && rng.bernoulli(0.2)) {
        s.advance(Event::response(now, rng.bernoulli(0.5)));
        ++trials;
      } else if (p == Phase::pause && rng.bernoulli(0.1)) {
        s.advance(Event::skip(now));
      } else {
        now += quantum;
        s.advance(Event::tick(now));
      }
    }
    const auto& tr = s.log().transitions;
    for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
      if (tr[i].to != Phase::stimulus) continue;
      REQUIRE(tr[i + 1].timestamp_ms - tr[i].timestamp_ms <= 250 + quantum);
    }
    CHECK(replay(material(), 0, s.log().events).log() == s.log());
  }
}

TEST_CASE("current effects re-establish the phase") {
  Session s = at_first_crosshair(0);
  s.advance(Event::tick(1000));
  const auto fx = s.current_effects();
  REQUIRE(fx.size() == 2);
  CHECK(fx[0].kind == EffectKind::show_crosshair);
  CHECK(fx[0].duration_ms == 1500);
  CHECK(fx[1].kind == EffectKind::preload_frames);
  CHECK(fx[1].scene_id == s.current_scene()->scene_id);
}
