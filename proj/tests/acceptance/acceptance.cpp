// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "deadeye/analysis/stats.hpp"
#include "deadeye/analysis/summary.hpp"
#include "deadeye/core/rng.hpp"
#include "deadeye/geometry/zones.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/runner/session.hpp"
#include "deadeye/runner/session_io.hpp"
#include "deadeye/scene/generator.hpp"
#include "deadeye/volume/raycast.hpp"
#include "deadeye/volume/volume.hpp"
#include "oracles.hpp"
#include "volume_fixtures.hpp"
#include "zone_fixtures.hpp"

using namespace deadeye;

namespace {

// Tolerances.
constexpr int kEquivalenceScenesMin = 1000;
constexpr double kEquivalenceBudgetS = 300.0;  // single-threaded at 512x512
constexpr ImageSize kEquivalenceSize{512, 512};
constexpr int kApparatusSeeds = 1000;
constexpr double kSubstitutionTolerance = 1e-6;
constexpr int kStepHalvingMaxDelta = 2;  // of 255
constexpr ImageSize kVolumeSize{160, 160};
constexpr int kPhantomSide = kDefaultPhantomSide;
constexpr int kStatsInstances = 1000;
constexpr double kStatsRelTolerance = 1e-9;
constexpr int kMirrorScenes = 100;

constexpr SetKind kKinds[] = {SetKind::exp1_4, SetKind::exp1_16, SetKind::exp1_30,
                              SetKind::depth2, SetKind::depth2_color_shape, SetKind::depth3_color};

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome deadeye_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const StereoRig rig = default_rig();
  const EyeView views[2] = {derive_eye_view(rig, kEquivalenceSize, Eye::left),
                            derive_eye_view(rig, kEquivalenceSize, Eye::right)};
  RenderOptions opt;
  opt.threads = 1;
  int scenes = 0, mismatches = 0;
  std::vector<int> per_kind(6, 0);
  for (std::uint64_t seed = 1; scenes < kEquivalenceScenesMin || seed <= 2; ++seed) {
    for (int k = 0; k < 6; ++k) {
      for (const TrialScene& s : generate_set(SetConfig::for_kind(kKinds[k], derive_seed(seed, "equivalence", k)))) {
        if (!s.has_target()) continue;
        const Eye dead = scenes % 2 == 0 ? Eye::right : Eye::left;
        const int d = dead == Eye::left ? 0 : 1;
        const HighlightSpec hl = HighlightSpec::deadeye(dead, *s.target_index);
        const RgbImage suppressed = render_eye(s, views[d], hl, 0.0, kEquivalenceSize, opt).image;
        const RgbImage removed = render_eye(s.without_target(), views[d], HighlightSpec::none(), 0.0, kEquivalenceSize, opt).image;
        const RgbImage other = render_eye(s, views[1 - d], hl, 0.0, kEquivalenceSize, opt).image;
        const RgbImage plain = render_eye(s, views[1 - d], HighlightSpec::none(), 0.0, kEquivalenceSize, opt).image;
        mismatches += !(suppressed == removed) + !(other == plain);
        ++scenes;
        ++per_kind[static_cast<std::size_t>(k)];
      }
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && scenes >= kEquivalenceScenesMin && elapsed < kEquivalenceBudgetS;
  for (int n : per_kind) o.pass = o.pass && n > 0;
  o.detail = fmt("%d target scenes over 6 kinds at 512x512, %d mismatching frames, %.1f s (budget %.0f s)", scenes,
                 mismatches, elapsed, kEquivalenceBudgetS);
  return o;
}

Outcome apparatus_fidelity() {
  Outcome o;
  const StereoRig rig = default_rig();
  long long scenes = 0, violations = 0, count_errors = 0;
  std::string first;
  const SetConfig defaults;
  const bool constants = defaults.scenes_per_set == 48 && defaults.target_count() == 24 && defaults.training_scenes == 20 &&
                         defaults.exposure_ms == 250 && defaults.crosshair_ms == 2500 && defaults.grid_rows == 5 &&
                         defaults.grid_cols == 6 && defaults.cube_angular_size_deg == 1.8 &&
                         defaults.grid_half_angle_h_deg == 14.93 && defaults.grid_half_angle_v_deg == 12.23 &&
                         defaults.plane_separation == 2.0 && defaults.max_occlusion == 0.10 &&
                         defaults.max_occlusion_far == 0.20;
  for (int seed = 1; seed <= kApparatusSeeds; ++seed) {
    const SetConfig cfg = SetConfig::for_kind(kKinds[seed % 6], static_cast<std::uint64_t>(seed));
    const std::vector<TrialScene> set = generate_set(cfg);
    int targets = 0;
    for (const TrialScene& s : set) {
      targets += s.has_target();
      const ValidationReport r = validate_scene(s, cfg, rig);
      violations += static_cast<long long>(r.violations.size());
      if (!r.ok() && first.empty()) first = s.scene_id + ": " + r.violations[0].check;
      ++scenes;
    }
    const SetConfig training = training_config(cfg);
    const std::vector<TrialScene> tset = generate_set(training);
    for (const TrialScene& s : tset) {
      const ValidationReport r = validate_scene(s, training, rig);
      violations += static_cast<long long>(r.violations.size());
      if (!r.ok() && first.empty()) first = s.scene_id + ": " + r.violations[0].check;
      ++scenes;
    }
    count_errors += set.size() != 48 || targets != 24 || tset.size() != 20;
  }
  o.pass = constants && violations == 0 && count_errors == 0;
  o.detail = fmt("%d seeds, %lld scenes validated, %lld violations, %lld count errors, constants %s%s%s", kApparatusSeeds,
                 scenes, violations, count_errors, constants ? "ok" : "WRONG", first.empty() ? "" : "; first: ",
                 first.c_str());
  return o;
}

Outcome volume_mask_semantics() {
  Outcome o;
  double worst_substitution = 0.0;
  int worst_step = 0;
  bool background_only = true, other_eye_intact = true;
  for (PhantomKind kind : {PhantomKind::nested_spheres, PhantomKind::gradient_block, PhantomKind::tube_tangle}) {
    const Phantom ph = make_phantom(kind, {kPhantomSide, kPhantomSide, kPhantomSide});
    const TransferFunction tf = TransferFunction::colored(ph.grid.value_min, ph.grid.value_max);
    const MaskVolume all(ph.grid.dims, true);
    for (const auto& vp : fixture::kViewpoints) {
      RenderSettings s;
      s.deadeye = Eye::right;
      const auto [l, r] = derive_eye_views(volume_rig(ph.grid, vp.azimuth, vp.elevation), kVolumeSize);

      background_only = background_only && fixture::all_background(raycast(ph.grid, tf, &all, r, s, kVolumeSize).image, s.background);
      other_eye_intact = other_eye_intact && raycast(ph.grid, tf, &all, l, s, kVolumeSize).image ==
                                                 raycast(ph.grid, tf, nullptr, l, s, kVolumeSize).image;

      for (std::uint16_t id = 1; id <= ph.segment_count; ++id) {
        const auto m = fixture::zero_opacity_case(ph, id);
        const double diff = fixture::max_abs_diff(raycast_float(ph.grid, tf, &m.mask, r, s, kVolumeSize),
                                                  raycast_float(m.substituted, tf, nullptr, r, s, kVolumeSize));
        worst_substitution = std::max(worst_substitution, diff);
      }

      RenderSettings coarse, fine;
      coarse.step_length = 0.5 * ph.grid.min_spacing();
      fine.step_length = 0.25 * ph.grid.min_spacing();
      worst_step = std::max(worst_step, fixture::max_channel_diff(raycast(ph.grid, tf, nullptr, l, coarse, kVolumeSize).image,
                                                                  raycast(ph.grid, tf, nullptr, l, fine, kVolumeSize).image));
    }
  }
  o.pass = background_only && other_eye_intact && worst_substitution <= kSubstitutionTolerance &&
           worst_step <= kStepHalvingMaxDelta;
  o.detail = fmt("mask-all background %s, other eye %s, substitution max %.3g (tol %.0e), step halving max %d/255 (tol %d)",
                 background_only ? "yes" : "NO", other_eye_intact ? "intact" : "CHANGED", worst_substitution,
                 kSubstitutionTolerance, worst_step, kStepHalvingMaxDelta);
  return o;
}

Outcome statistics_oracles() {
  Outcome o;
  Rng rng(20190415);
  double worst = 0.0;
  auto track = [&](double got, double want) { worst = std::max(worst, oracle::rel_err(got, want)); };
  auto sample = [&](std::size_t n, double spread) {
    std::vector<double> v(n);
    const double shift = rng.uniform(-1, 1);
    for (double& x : v) x = shift + rng.uniform(-spread, spread);
    return v;
  };
  for (int i = 0; i < kStatsInstances; ++i) {
    const std::size_t n = 2 + rng.below(30);
    const auto a = sample(n, 1.0);
    const auto b = sample(n, rng.uniform(0.2, 3.0));
    const auto c = sample(2 + rng.below(30), rng.uniform(0.2, 3.0));

    const TestResult p = t_test_paired(a, b);
    const oracle::Ref pr = oracle::paired(a, b);
    track(p.statistic, pr.statistic);
    track(p.p_value, pr.p);

    const TestResult w = t_test_welch(a, c);
    const oracle::Ref wr = oracle::welch(a, c);
    track(w.statistic, wr.statistic);
    track(w.df1, wr.df1);
    track(w.p_value, wr.p);

    std::vector<std::vector<double>> m(2 + rng.below(24), std::vector<double>(2 + rng.below(6)));
    for (auto& row : m) {
      const double subject = rng.uniform(-1, 1);
      for (double& x : row) x = subject + rng.uniform(0, 1);
    }
    const TestResult f = rm_anova_oneway(m);
    const oracle::Ref fr = oracle::rm_anova(m);
    track(f.statistic, fr.statistic);
    track(f.p_value, fr.p);
    if (f.df1 != fr.df1 || f.df2 != fr.df2) worst = 1.0;
  }
  std::vector<std::vector<double>> design(24, std::vector<double>(6));
  for (auto& row : design) {
    for (double& x : row) x = rng.uniform(0.6, 1.0);
  }
  const TestResult f = rm_anova_oneway(design);
  const bool df_ok = f.df1 == 5 && f.df2 == 115;
  o.pass = worst <= kStatsRelTolerance && df_ok;
  o.detail = fmt("%d instances each of paired t, Welch t, rm-ANOVA; max relative error %.3g (tol %.0e); 24x6 df = (%g, %g)",
                 kStatsInstances, worst, kStatsRelTolerance, f.df1, f.df2);
  return o;
}

Outcome end_to_end_replay() {
  Outcome o;
  auto material = prepare_material(build_default_plan("acceptance", 7));
  Session s(material, 0);
  simulate(s, [](const TrialScene& scene) { return scene.has_target(); });
  const SessionLog& log = s.log();
  int scored = 0;
  for (const ResponseRecord& r : log.responses) scored += !r.training;
  const Summary summary = summarize({log});
  bool all_perfect = summary.overall.accuracy.mean == 1.0;
  for (const SetSummary& set : summary.sets) all_perfect = all_perfect && set.pooled.accuracy() == 1.0 && set.accuracy.mean == 1.0;
  const bool replay_exact = replay(material, 0, log.events).log() == log;
  const bool file_exact = import_session(export_session(log)) == log;
  o.pass = scored == 288 && summary.sets.size() == 6 && all_perfect && replay_exact && file_exact;
  o.detail = fmt("%d scored trials, %zu sets, accuracy 1.0 everywhere %s, replay %s, export/import %s", scored,
                 summary.sets.size(), all_perfect ? "yes" : "NO", replay_exact ? "bit-exact" : "DIFFERS",
                 file_exact ? "bit-exact" : "DIFFERS");
  return o;
}

Outcome zone_classifier() {
  Outcome o;
  const StereoRig rig;
  const fixture::TwoPlaneScene s;
  const bool right = classify_monocular_zone(s.behind_right_edge(), s.occluders, rig) == MonocularZone::valid_right_only;
  const bool left = classify_monocular_zone(s.behind_left_edge(), s.occluders, rig) == MonocularZone::valid_left_only;
  const Vec3 target{0.2, 0.1, -2.0};
  const bool invalid = classify_monocular_zone(target, {}, rig, Presentation::left_only) == MonocularZone::invalid_left_only &&
                       classify_monocular_zone(target, {}, rig, Presentation::right_only) == MonocularZone::invalid_right_only;
  long long checked = 0, broken = 0;
  for (int seed = 1; seed <= kMirrorScenes; ++seed) {
    const auto scene = fixture::random_zone_scene(static_cast<std::uint64_t>(seed));
    const auto mirrored_occluders = fixture::mirrored_solids(scene.occluders);
    for (const Vec3& p : scene.points) {
      for (Presentation pres : {Presentation::both, Presentation::left_only, Presentation::right_only}) {
        const MonocularZone z = classify_monocular_zone(p, scene.occluders, rig, pres);
        broken += classify_monocular_zone(fixture::mirror(p), mirrored_occluders, rig, fixture::mirror(pres)) != mirrored(z);
        ++checked;
      }
    }
  }
  o.pass = right && left && invalid && broken == 0;
  o.detail = fmt("far plane right edge %s, left edge %s, occluder-free deadeye %s, mirror symmetry %lld/%lld over %d scenes",
                 right ? "valid_right_only" : "WRONG", left ? "valid_left_only" : "WRONG", invalid ? "invalid" : "WRONG",
                 checked - broken, checked, kMirrorScenes);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"deadeye-equivalence", deadeye_equivalence}, {"apparatus-fidelity", apparatus_fidelity},
      {"volume-mask-semantics", volume_mask_semantics}, {"statistics-oracles", statistics_oracles},
      {"end-to-end-replay", end_to_end_replay},     {"monocular-zones", zone_classifier},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %-22s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
