// deadeye command-line tool: scene generation, rendering, volume ray casting,
// session simulation, analysis, charts, and the session service.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <httplib.h>

#include "deadeye/analysis/report.hpp"
#include "deadeye/analysis/stats.hpp"
#include "deadeye/analysis/summary.hpp"
#include "deadeye/core/error.hpp"
#include "deadeye/core/image.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/runner/service.hpp"
#include "deadeye/runner/session.hpp"
#include "deadeye/runner/session_io.hpp"
#include "deadeye/scene/generator.hpp"
#include "deadeye/scene/scene_io.hpp"
#include "deadeye/volume/raycast.hpp"
#include "deadeye/volume/volume.hpp"

namespace fs = std::filesystem;
using namespace deadeye;

namespace {

std::string underscored(std::string s) {
  std::replace(s.begin(), s.end(), '-', '_');
  return s;
}

ImageSize parse_size(const std::string& text) {
  int w = 0, h = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || (x != 'x' && x != 'X') || w < 1 || h < 1) {
    throw Error(ErrorKind::configuration, "size must look like 512x512");
  }
  return {w, h};
}

Highlight parse_technique(const std::string& text) {
  const std::string t = underscored(text);
  if (t == "color") return Highlight::color_popout;
  return highlight_from_string(t);
}

HighlightSpec spec_for(const TrialScene& scene, Highlight technique) {
  if (!scene.target_index) return HighlightSpec::none();
  const std::size_t t = *scene.target_index;
  switch (technique) {
    case Highlight::deadeye_left: return HighlightSpec::deadeye(Eye::left, t);
    case Highlight::deadeye_right: return HighlightSpec::deadeye(Eye::right, t);
    case Highlight::color_popout: return HighlightSpec::color_popout(t);
    case Highlight::flicker: return HighlightSpec::flicker(t);
    case Highlight::none: break;
  }
  return HighlightSpec::none();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
}

// ---- gen / validate ----

struct GenArgs {
  std::string kind = "exp1_30";
  std::uint64_t seed = 1;
  std::string out;
  bool training = false;
  bool all = false;
  unsigned threads = 1;
};

void run_gen(const GenArgs& a) {
  std::vector<SetKind> kinds;
  if (a.all) {
    kinds.assign(std::begin(kAllSetKinds), std::end(kAllSetKinds));
  } else {
    kinds.push_back(set_kind_from_string(underscored(a.kind)));
  }
  for (SetKind kind : kinds) {
    SetConfig config = SetConfig::for_kind(kind, a.seed);
    if (a.training) config = training_config(config);
    SceneSet set{config, generate_set(config, a.threads)};
    std::string path = a.out;
    if (a.all || path.empty()) {
      const std::string name = std::string(to_string(kind)) + (a.training ? "-training" : "") + "-" + std::to_string(a.seed) + ".json";
      path = (fs::path(a.out.empty() ? "." : a.out) / name).string();
      if (!a.out.empty()) fs::create_directories(a.out);
    }
    save_scene_set(path, set);
    std::cout << "wrote " << set.scenes.size() << " scenes (" << config.target_count() << " targets) to " << path << "\n";
  }
}

int run_validate(const std::string& path) {
  const SceneSet set = load_scene_set(path);
  int bad = 0;
  for (const TrialScene& s : set.scenes) {
    const ValidationReport report = validate_scene(s, set.config, default_rig());
    for (const Violation& v : report.violations) {
      std::cout << s.scene_id << ": " << v.check << " measured " << v.measured << " expected " << v.expected << " "
                << v.detail << "\n";
    }
    if (!report.ok()) ++bad;
  }
  std::cout << set.scenes.size() - static_cast<std::size_t>(bad) << "/" << set.scenes.size() << " scenes valid\n";
  return bad == 0 ? 0 : 1;
}

// ---- render ----

struct RenderArgs {
  std::string set_path;
  std::string kind = "exp1_30";
  std::uint64_t seed = 1;
  std::string scene_id;
  int index = 0;
  std::string technique;
  std::string layout = "side_by_side";
  std::string eye;
  std::string size = "512x512";
  double time_ms = 0.0;
  int supersample = 1;
  unsigned threads = 1;
  std::string out = "frame.png";
};

void run_render(const RenderArgs& a) {
  SceneSet set;
  if (!a.set_path.empty()) {
    set = load_scene_set(a.set_path);
  } else {
    set.config = SetConfig::for_kind(set_kind_from_string(underscored(a.kind)), a.seed);
    set.scenes = generate_set(set.config, a.threads);
  }
  const TrialScene* scene = nullptr;
  if (!a.scene_id.empty()) {
    for (const TrialScene& s : set.scenes) {
      if (s.scene_id == a.scene_id) scene = &s;
    }
    if (!scene) throw Error(ErrorKind::configuration, "no scene '" + a.scene_id + "' in the set");
  } else {
    if (a.index < 0 || static_cast<std::size_t>(a.index) >= set.scenes.size()) {
      throw Error(ErrorKind::configuration, "scene index out of range");
    }
    scene = &set.scenes[static_cast<std::size_t>(a.index)];
  }
  const HighlightSpec highlight =
      a.technique.empty() ? HighlightSpec::from_scene(*scene) : spec_for(*scene, parse_technique(a.technique));
  const ImageSize size = parse_size(a.size);
  RenderOptions options;
  options.threads = a.threads;
  options.supersample = a.supersample;
  RgbImage image;
  if (!a.eye.empty()) {
    const Eye eye = eye_from_string(a.eye);
    image = render_eye(*scene, derive_eye_view(default_rig(), size, eye), highlight, a.time_ms, size, options).image;
  } else {
    auto [l, r] = render_stereo_pair(*scene, default_rig(), highlight, a.time_ms, size, options);
    image = compose(l, r, stereo_layout_from_string(underscored(a.layout)));
  }
  write_image(a.out, image);
  std::cout << scene->scene_id << " (" << to_string(highlight.technique()) << ", target "
            << (scene->target_index ? std::to_string(*scene->target_index) : "none") << ") -> " << a.out << "\n";
}

// ---- volcast ----

struct VolcastArgs {
  std::string volume;
  std::string phantom;
  int phantom_size = kDefaultPhantomSide;
  std::string tf = "greyscale";
  std::string mask;
  int segment = -1;
  int dilate = 0;
  std::string deadeye = "right";
  std::string clip;
  std::string size = "512x512";
  std::string layout = "side_by_side";
  std::string eye;
  double azimuth = 30.0;
  double elevation = 15.0;
  double step = 0.0;
  unsigned threads = 1;
  std::string isa;
  std::string out = "volume.png";
};

void run_volcast(const VolcastArgs& a) {
  VolumeGrid grid;
  std::optional<LabelVolume> labels;
  if (!a.phantom.empty()) {
    Phantom p = make_phantom(phantom_kind_from_string(underscored(a.phantom)), Dims{a.phantom_size, a.phantom_size, a.phantom_size});
    grid = std::move(p.grid);
    labels = std::move(p.labels);
  } else if (!a.volume.empty()) {
    grid = load_raw_volume(a.volume);
  } else {
    throw Error(ErrorKind::configuration, "give --volume or --phantom");
  }
  TransferFunction tf;
  if (a.tf == "greyscale") {
    tf = TransferFunction::greyscale(grid.value_min, grid.value_max);
  } else if (a.tf == "colored") {
    tf = TransferFunction::colored(grid.value_min, grid.value_max);
  } else {
    tf = TransferFunction::load(a.tf);
  }
  tf.check(grid.value_min, grid.value_max);

  MaskVolume mask(grid.dims);
  if (!a.mask.empty()) {
    mask = load_mask(a.mask);
    if (!(mask.dims() == grid.dims)) throw Error(ErrorKind::contract, "mask dims differ from the volume");
  } else if (a.segment >= 0) {
    if (!labels) throw Error(ErrorKind::configuration, "--segment needs a phantom with labels");
    SegmentMask sm = mask_from_segment(*labels, static_cast<std::uint16_t>(a.segment));
    if (sm.id_absent) std::cerr << "warning: segment " << a.segment << " does not occur in the volume\n";
    mask = a.dilate > 0 ? dilate(sm.mask, a.dilate) : sm.mask;
  }

  RenderSettings settings;
  settings.threads = a.threads;
  if (a.deadeye != "off") settings.deadeye = eye_from_string(a.deadeye);
  if (a.step > 0) settings.step_length = a.step;
  if (!a.isa.empty()) {
    settings.isa = simd::isa_from_string(a.isa);
    if (!settings.isa) throw Error(ErrorKind::configuration, "unknown isa '" + a.isa + "'");
  }
  if (!a.clip.empty()) {
    double v[4];
    char comma = 0;
    std::istringstream in(a.clip);
    if (!(in >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3])) {
      throw Error(ErrorKind::configuration, "clip must be nx,ny,nz,d");
    }
    settings.clip_plane = ClipPlane{{v[0], v[1], v[2]}, v[3]};
  }
  const ImageSize size = parse_size(a.size);
  const auto views = derive_eye_views(volume_rig(grid, a.azimuth, a.elevation), size);
  const auto start = std::chrono::steady_clock::now();
  RgbImage image;
  if (!a.eye.empty()) {
    const Eye eye = eye_from_string(a.eye);
    image = raycast(grid, tf, &mask, eye == Eye::left ? views.first : views.second, settings, size).image;
  } else {
    const RenderedFrame l = raycast(grid, tf, &mask, views.first, settings, size);
    const RenderedFrame r = raycast(grid, tf, &mask, views.second, settings, size);
    image = compose(l, r, stereo_layout_from_string(underscored(a.layout)));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_image(a.out, image);
  std::cout << "masked voxels " << mask.popcount() << ", render " << seconds << " s -> " << a.out << "\n";
}

// ---- simulate ----

struct SimulateArgs {
  std::string participant = "P01";
  std::uint64_t seed = 1;
  int count = 1;
  std::string technique = "deadeye_right";
  std::string responder = "perfect";
  double accuracy = 0.91;
  unsigned threads = 1;
  std::string out = "sessions";
};

void run_simulate(const SimulateArgs& a) {
  fs::create_directories(a.out);
  for (int i = 0; i < a.count; ++i) {
    const std::string id = a.count == 1 ? a.participant : a.participant + "-" + std::to_string(i + 1);
    const std::uint64_t seed = derive_seed(a.seed, "participant", static_cast<std::uint64_t>(i));
    const SessionPlan plan = build_default_plan(id, seed, parse_technique(a.technique));
    Session session(prepare_material(plan, a.threads), 0);
    Rng rng(derive_seed(seed, "responder"));
    simulate(session, [&](const TrialScene& scene) {
      const bool truth = scene.has_target();
      if (a.responder == "perfect") return truth;
      if (a.responder == "always-no") return false;
      if (a.responder == "always-yes") return true;
      if (a.responder == "noisy") return rng.bernoulli(a.accuracy) ? truth : !truth;
      throw Error(ErrorKind::configuration, "unknown responder '" + a.responder + "'");
    });
    const fs::path path = fs::path(a.out) / (id + ".jsonl");
    export_session(path, session.log());
    std::cout << "wrote " << path.string() << " (" << session.log().responses.size() << " responses)\n";
  }
}

// ---- analyze / plot ----

struct AnalyzeArgs {
  std::string logs;
  std::string format = "csv";
  std::string out;
  std::string chart;
  bool by_plane = false;
  std::vector<std::string> sets;
  std::string test = "anova";
  std::string cohort_b;
  bool gg = false;
};

std::vector<SetKind> parse_sets(const std::vector<std::string>& names) {
  std::vector<SetKind> out;
  for (const std::string& n : names) out.push_back(set_kind_from_string(underscored(n)));
  return out;
}

void run_summary(const AnalyzeArgs& a) {
  const Summary s = summarize(load_session_logs(a.logs));
  emit(a.format == "json" ? to_json(s).dump(1) + "\n" : summary_csv(s), a.out);
  if (!a.chart.empty()) write_image(a.chart, plot_accuracy(s));
}

void run_matrix(const AnalyzeArgs& a) {
  PositionOptions options;
  options.by_plane = a.by_plane;
  options.sets = parse_sets(a.sets);
  const std::vector<PositionMatrix> m = position_matrix(load_session_logs(a.logs), options);
  if (a.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const PositionMatrix& x : m) j.push_back(to_json(x));
    emit(j.dump(1) + "\n", a.out);
  } else {
    emit(matrix_csv(m), a.out);
  }
  if (!a.chart.empty()) {
    for (const PositionMatrix& x : m) {
      fs::path p = a.chart;
      if (x.depth_plane) p.replace_filename(p.stem().string() + "-plane" + std::to_string(*x.depth_plane) + p.extension().string());
      write_image(p, plot_position(x));
    }
  }
}

void run_tlx(const AnalyzeArgs& a) {
  const auto t = tlx_aggregate(load_session_logs(a.logs));
  if (a.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& x : t) j.push_back(to_json(x));
    emit(j.dump(1) + "\n", a.out);
  } else {
    emit(tlx_csv(t), a.out);
  }
  if (!a.chart.empty()) write_image(a.chart, plot_tlx(t));
}

void run_test(const AnalyzeArgs& a) {
  const Summary s = summarize(load_session_logs(a.logs));
  std::vector<SetKind> sets = parse_sets(a.sets);
  std::vector<std::pair<std::string, TestResult>> results;
  if (a.test == "anova") {
    if (sets.empty()) sets.assign(std::begin(kAllSetKinds), std::end(kAllSetKinds));
    AnovaOptions options;
    options.greenhouse_geisser = a.gg;
    results.emplace_back("sets", rm_anova_oneway(accuracy_matrix(s, sets), options));
  } else if (a.test == "paired") {
    if (sets.size() != 2) throw Error(ErrorKind::configuration, "paired test needs --sets A,B");
    const auto m = accuracy_matrix(s, sets);
    std::vector<double> x, y;
    for (const auto& row : m) {
      x.push_back(row[0]);
      y.push_back(row[1]);
    }
    results.emplace_back(std::string(to_string(sets[0])) + "-vs-" + to_string(sets[1]), t_test_paired(x, y));
  } else if (a.test == "welch" || a.test == "pooled") {
    // Two independent cohorts on the same set, or two sets within one cohort.
    if (sets.empty() || sets.size() > 2) throw Error(ErrorKind::configuration, "independent test needs --sets A[,B]");
    auto column = [](const Summary& sum, SetKind k) {
      std::vector<double> v;
      for (const auto& row : accuracy_matrix(sum, {k})) v.push_back(row[0]);
      return v;
    };
    const std::vector<double> x = column(s, sets[0]);
    const std::vector<double> y = a.cohort_b.empty() ? column(s, sets.back())
                                                     : column(summarize(load_session_logs(a.cohort_b)), sets.back());
    results.emplace_back(a.test, a.test == "welch" ? t_test_welch(x, y) : t_test_pooled(x, y));
  } else {
    throw Error(ErrorKind::configuration, "unknown test '" + a.test + "'");
  }
  if (a.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [name, r] : results) {
      nlohmann::json x = to_json(r);
      x["name"] = name;
      j.push_back(x);
    }
    emit(j.dump(1) + "\n", a.out);
  } else {
    emit(test_csv(results), a.out);
  }
}

void run_plot(const std::string& logs, const std::string& out_dir) {
  const std::vector<SessionLog> all = load_session_logs(logs);
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_image(dir / "accuracy.png", plot_accuracy(summarize(all)));
  const auto tlx = tlx_aggregate(all);
  const bool has_tlx = std::any_of(tlx.begin(), tlx.end(), [](const auto& q) { return q.kind == QuestionnaireKind::nasa_tlx; });
  if (has_tlx) write_image(dir / "tlx.png", plot_tlx(tlx));
  for (const PositionMatrix& m : position_matrix(all)) write_image(dir / "positions.png", plot_position(m));
  std::cout << "charts written to " << dir.string() << "\n";
}

// ---- serve ----

struct ServeArgs {
  std::string http;
  unsigned threads = 1;
  std::string log_dir;
};

void run_serve(const ServeArgs& a) {
  ServiceOptions options;
  options.threads = a.threads;
  if (!a.log_dir.empty()) {
    fs::create_directories(a.log_dir);
    options.log_dir = a.log_dir;
  }
  Service service(options);
  if (a.http.empty()) {
    serve_lines(service, std::cin, std::cout);
    return;
  }
  const auto colon = a.http.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::configuration, "--http expects host:port");
  const std::string host = a.http.substr(0, colon);
  const int port = std::stoi(a.http.substr(colon + 1));
  httplib::Server server;
  server.Post("/rpc", [&](const httplib::Request& req, httplib::Response& res) {
    res.set_content(service.handle_line(req.body), "application/json");
  });
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok\n", "text/plain"); });
  std::cerr << "listening on " << host << ":" << port << "\n";
  if (!server.listen(host, port)) throw Error(ErrorKind::io, "cannot listen on " + a.http);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dichoptic rendering and experiment toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a scene set file");
  gen_cmd->add_option("--kind", gen.kind, "exp1_4|exp1_16|exp1_30|depth2|depth2_color_shape|depth3_color");
  gen_cmd->add_option("--seed", gen.seed, "Set seed");
  gen_cmd->add_option("--out", gen.out, "Output file (directory with --all)");
  gen_cmd->add_flag("--training", gen.training, "Generate the training set instead");
  gen_cmd->add_flag("--all", gen.all, "All six set kinds");
  gen_cmd->add_option("--threads", gen.threads);

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scene set against the apparatus constraints");
  validate_cmd->add_option("set", validate_path)->required();

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render", "Render a stereo pair of one scene");
  render_cmd->add_option("--set", render.set_path, "Scene set file (otherwise generated from --kind/--seed)");
  render_cmd->add_option("--kind", render.kind);
  render_cmd->add_option("--seed", render.seed);
  render_cmd->add_option("--scene", render.scene_id, "Scene id");
  render_cmd->add_option("--index", render.index, "Scene index in presentation order");
  render_cmd->add_option("--technique", render.technique, "deadeye-right|deadeye-left|color|flicker|none");
  render_cmd->add_option("--layout", render.layout, "side-by-side|anaglyph|left-only|right-only");
  render_cmd->add_option("--eye", render.eye, "Write a single eye instead of a layout");
  render_cmd->add_option("--size", render.size, "WxH per eye");
  render_cmd->add_option("--time-ms", render.time_ms, "Presentation time (flicker phase)");
  render_cmd->add_option("--supersample", render.supersample, "1 or 2");
  render_cmd->add_option("--threads", render.threads);
  render_cmd->add_option("--out", render.out, ".png or .ppm");

  VolcastArgs vol;
  auto* vol_cmd = app.add_subcommand("volcast", "Ray cast a volume for both eyes");
  vol_cmd->add_option("--volume", vol.volume, "Raw volume header");
  vol_cmd->add_option("--phantom", vol.phantom, "nested_spheres|gradient_block|tube_tangle");
  vol_cmd->add_option("--phantom-size", vol.phantom_size);
  vol_cmd->add_option("--tf", vol.tf, "greyscale|colored|file");
  vol_cmd->add_option("--mask", vol.mask, "Mask header");
  vol_cmd->add_option("--segment", vol.segment, "Mask a phantom segment id");
  vol_cmd->add_option("--dilate", vol.dilate, "Grow the segment mask by N voxels");
  vol_cmd->add_option("--deadeye", vol.deadeye, "left|right|off");
  vol_cmd->add_option("--clip", vol.clip, "nx,ny,nz,d");
  vol_cmd->add_option("--size", vol.size, "WxH per eye");
  vol_cmd->add_option("--layout", vol.layout);
  vol_cmd->add_option("--eye", vol.eye);
  vol_cmd->add_option("--azimuth", vol.azimuth);
  vol_cmd->add_option("--elevation", vol.elevation);
  vol_cmd->add_option("--step", vol.step, "Sample spacing in mm");
  vol_cmd->add_option("--threads", vol.threads);
  vol_cmd->add_option("--isa", vol.isa, "scalar|avx2");
  vol_cmd->add_option("--out", vol.out);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run scripted participants through the default plan");
  sim_cmd->add_option("--participant", sim.participant);
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--count", sim.count, "Number of participants");
  sim_cmd->add_option("--technique", sim.technique);
  sim_cmd->add_option("--responder", sim.responder, "perfect|always-no|always-yes|noisy");
  sim_cmd->add_option("--accuracy", sim.accuracy, "Per-trial correctness for the noisy responder");
  sim_cmd->add_option("--threads", sim.threads);
  sim_cmd->add_option("--out", sim.out, "Output directory");

  AnalyzeArgs an;
  auto* analyze_cmd = app.add_subcommand("analyze", "Summaries and tests over session logs");
  analyze_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("logs", an.logs, "Session log file or directory")->required();
    cmd->add_option("--format", an.format, "csv|json");
    cmd->add_option("--out", an.out, "Output file (stdout by default)");
  };
  auto* summary_cmd = analyze_cmd->add_subcommand("summary", "Accuracy and error split per set");
  add_common(summary_cmd);
  summary_cmd->add_option("--chart", an.chart, "Also write a bar chart");
  auto* matrix_cmd = analyze_cmd->add_subcommand("matrix", "Detection rate per grid cell");
  add_common(matrix_cmd);
  matrix_cmd->add_flag("--by-plane", an.by_plane);
  matrix_cmd->add_option("--sets", an.sets)->delimiter(',');
  matrix_cmd->add_option("--chart", an.chart);
  auto* tlx_cmd = analyze_cmd->add_subcommand("tlx", "Questionnaire means and SDs");
  add_common(tlx_cmd);
  tlx_cmd->add_option("--chart", an.chart);
  auto* test_cmd = analyze_cmd->add_subcommand("test", "Significance tests on participant accuracies");
  add_common(test_cmd);
  test_cmd->add_option("--test", an.test, "anova|paired|welch|pooled");
  test_cmd->add_option("--sets", an.sets)->delimiter(',');
  test_cmd->add_option("--cohort-b", an.cohort_b, "Second cohort for welch/pooled");
  test_cmd->add_flag("--gg", an.gg, "Greenhouse-Geisser correction");

  std::string plot_logs, plot_dir = "charts";
  auto* plot_cmd = app.add_subcommand("plot", "Write accuracy, TLX and position charts");
  plot_cmd->add_option("logs", plot_logs)->required();
  plot_cmd->add_option("--out-dir", plot_dir);

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Session service over stdin/stdout or HTTP");
  serve_cmd->add_option("--http", serve.http, "host:port; POST JSON requests to /rpc");
  serve_cmd->add_option("--threads", serve.threads);
  serve_cmd->add_option("--log-dir", serve.log_dir, "Where export writes session logs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) run_gen(gen);
    if (*validate_cmd) return run_validate(validate_path);
    if (*render_cmd) run_render(render);
    if (*vol_cmd) run_volcast(vol);
    if (*sim_cmd) run_simulate(sim);
    if (*summary_cmd) run_summary(an);
    if (*matrix_cmd) run_matrix(an);
    if (*tlx_cmd) run_tlx(an);
    if (*test_cmd) run_test(an);
    if (*plot_cmd) run_plot(plot_logs, plot_dir);
    if (*serve_cmd) run_serve(serve);
  } catch (const std::exception& e) {
    std::cerr << "deadeye: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
