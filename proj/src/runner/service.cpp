#include "deadeye/runner/service.hpp"

#include <istream>
#include <ostream>
#include <variant>

#include "deadeye/core/error.hpp"
#include "deadeye/core/image.hpp"
#include "deadeye/render/renderer.hpp"
#include "deadeye/runner/codec.hpp"
#include "deadeye/runner/session.hpp"
#include "deadeye/runner/session_io.hpp"
#include "deadeye/scene/generator.hpp"
#include "deadeye/volume/raycast.hpp"
#include "deadeye/volume/volume.hpp"

namespace deadeye {

using nlohmann::json;

namespace {

struct TrialWorkspace {
  std::unique_ptr<Session> session;
};

struct VolumeWorkspace {
  VolumeGrid grid;
  std::optional<LabelVolume> labels;
  TransferFunction tf;
  MaskVolume mask;
  Eye deadeye = Eye::right;
};

json effects_json(const std::vector<Effect>& effects) {
  json out = json::array();
  for (const Effect& e : effects) out.push_back(codec::to_json(e));
  return out;
}

ImageSize frame_size(const json& req, const ServiceOptions& options) {
  ImageSize size = options.default_frame;
  size.width = req.value("width", size.width);
  size.height = req.value("height", size.height);
  if (size.width < 1 || size.height < 1 || size.width > options.max_frame_side || size.height > options.max_frame_side) {
    throw Error(ErrorKind::domain, "frame size out of range");
  }
  return size;
}

// Exactly one of "eye" and "layout".
struct FrameTarget {
  std::optional<Eye> eye;
  StereoLayout layout = StereoLayout::side_by_side;
};

FrameTarget frame_target(const json& req) {
  const bool has_eye = req.contains("eye");
  const bool has_layout = req.contains("layout");
  if (has_eye == has_layout) throw Error(ErrorKind::protocol, "give exactly one of 'eye' and 'layout'");
  FrameTarget t;
  if (has_eye) {
    t.eye = eye_from_string(req["eye"].get<std::string>());
  } else {
    t.layout = stereo_layout_from_string(req["layout"].get<std::string>());
  }
  return t;
}

json frame_result(const RgbImage& image, const FrameTarget& target) {
  json r = {{"width", image.width}, {"height", image.height}, {"png_base64", base64_encode(encode_png(image))}};
  if (target.eye) {
    r["eye"] = to_string(*target.eye);
  } else {
    r["layout"] = to_string(target.layout);
  }
  return r;
}

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::protocol, "expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

const std::vector<std::string>& op_names() {
  static const std::vector<std::string> names = {
      "hello",  "create_session",        "advance",     "submit_questionnaire", "get_frame",   "state",
      "export", "close_session",         "create_volume_session", "brush_erase", "mask_segment", "clear_mask",
      "volume_frame"};
  return names;
}

}  // namespace

struct Service::Slot {
  std::mutex mutex;
  std::int64_t last_seq = 0;
  std::variant<TrialWorkspace, VolumeWorkspace> work;
};

Service::Service(ServiceOptions options) : options_(std::move(options)) {}
Service::~Service() = default;

std::size_t Service::session_count() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

std::shared_ptr<Service::Slot> Service::find(const std::string& session_id) const {
  std::lock_guard lock(mutex_);
  auto it = slots_.find(session_id);
  if (it == slots_.end()) throw Error(ErrorKind::protocol, "unknown session '" + session_id + "'");
  return it->second;
}

std::string Service::handle_line(const std::string& line) {
  json request;
  try {
    request = json::parse(line);
  } catch (const json::exception& e) {
    return json({{"protocol", kProtocolName},
                 {"version", kProtocolVersion},
                 {"ok", false},
                 {"error", {{"kind", "format"}, {"message", std::string("request is not valid JSON: ") + e.what()}}}})
        .dump();
  }
  return handle(request).dump();
}

json Service::handle(const json& request) {
  json response = {{"protocol", kProtocolName}, {"version", kProtocolVersion}};
  if (request.is_object()) {
    for (const char* key : {"op", "session_id", "seq"}) {
      if (request.contains(key)) response[key] = request[key];
    }
  }
  try {
    response["result"] = dispatch(request);
    response["ok"] = true;
  } catch (const Error& e) {
    response["ok"] = false;
    response["error"] = {{"kind", to_string(e.kind())}, {"message", e.detail()}};
  } catch (const json::exception& e) {
    response["ok"] = false;
    response["error"] = {{"kind", "protocol"}, {"message", std::string("malformed request: ") + e.what()}};
  }
  return response;
}

json Service::dispatch(const json& req) {
  if (!req.is_object()) throw Error(ErrorKind::protocol, "request must be a JSON object");
  if (req.contains("protocol") && req["protocol"] != kProtocolName) throw Error(ErrorKind::protocol, "unknown protocol");
  if (req.contains("version") && req["version"] != kProtocolVersion) {
    throw Error(ErrorKind::protocol, "unsupported protocol version " + req["version"].dump());
  }
  const std::string op = req.at("op").get<std::string>();
  if (op == "hello") return {{"protocol", kProtocolName}, {"version", kProtocolVersion}, {"ops", op_names()}};

  const std::string session_id = req.at("session_id").get<std::string>();
  const std::int64_t seq = req.at("seq").get<std::int64_t>();
  if (session_id.empty()) throw Error(ErrorKind::protocol, "session_id must not be empty");

  if (op == "create_session" || op == "create_volume_session") {
    if (seq < 1) throw Error(ErrorKind::protocol, "seq must start at 1 or above");
    auto slot = std::make_shared<Slot>();
    slot->last_seq = seq;
    json result;
    if (op == "create_session") {
      const SessionPlan plan =
          build_default_plan(req.at("participant_id").get<std::string>(), codec::seed_from(req.at("rng_seed")),
                             highlight_from_string(req.value("technique", std::string("deadeye_right"))));
      auto session = std::make_unique<Session>(prepare_material(plan, options_.threads), req.value("start_ms", std::int64_t{0}));
      result = {{"plan", codec::to_json(plan)},
                {"state", codec::to_json(session->state())},
                {"effects", effects_json(session->current_effects())}};
      slot->work = TrialWorkspace{std::move(session)};
    } else {
      VolumeWorkspace w;
      if (req.contains("phantom")) {
        const json& p = req["phantom"];
        const int n = p.value("size", kDefaultPhantomSide);
        Phantom ph = make_phantom(phantom_kind_from_string(p.at("kind").get<std::string>()), Dims{n, n, n});
        w.grid = std::move(ph.grid);
        w.labels = std::move(ph.labels);
        result["segment_count"] = ph.segment_count;
      } else {
        w.grid = load_raw_volume(req.at("volume").get<std::string>());
        if (req.contains("labels")) {
          const VolumeGrid lab = load_raw_volume(req["labels"].get<std::string>());
          if (!(lab.dims == w.grid.dims)) throw Error(ErrorKind::contract, "label volume dims differ from the volume");
          w.labels = LabelVolume{lab.dims, lab.scalars};
        }
      }
      const std::string tf = req.value("tf", std::string("greyscale"));
      if (tf == "greyscale") {
        w.tf = TransferFunction::greyscale(w.grid.value_min, w.grid.value_max);
      } else if (tf == "colored") {
        w.tf = TransferFunction::colored(w.grid.value_min, w.grid.value_max);
      } else {
        w.tf = TransferFunction::load(tf);
      }
      w.tf.check(w.grid.value_min, w.grid.value_max);
      w.deadeye = eye_from_string(req.value("deadeye", std::string("right")));
      w.mask = MaskVolume(w.grid.dims);
      const Vec3 ext = w.grid.extent();
      result["dims"] = {w.grid.dims.nx, w.grid.dims.ny, w.grid.dims.nz};
      result["spacing"] = {w.grid.spacing.x, w.grid.spacing.y, w.grid.spacing.z};
      result["extent_mm"] = {ext.x, ext.y, ext.z};
      result["value_range"] = {w.grid.value_min, w.grid.value_max};
      result["deadeye"] = to_string(w.deadeye);
      slot->work = std::move(w);
    }
    std::lock_guard lock(mutex_);
    if (!slots_.emplace(session_id, slot).second) {
      throw Error(ErrorKind::protocol, "session '" + session_id + "' already exists");
    }
    return result;
  }

  std::shared_ptr<Slot> slot = find(session_id);
  std::lock_guard lock(slot->mutex);
  if (seq <= slot->last_seq) {
    throw Error(ErrorKind::protocol,
                "seq " + std::to_string(seq) + " is not above the last accepted " + std::to_string(slot->last_seq));
  }
  slot->last_seq = seq;

  if (op == "close_session") {
    std::lock_guard map_lock(mutex_);
    slots_.erase(session_id);
    return json::object();
  }

  if (auto* t = std::get_if<TrialWorkspace>(&slot->work)) {
    Session& s = *t->session;
    auto step = [&](const Event& e) {
      const std::vector<Effect> effects = s.advance(e);
      return json{{"state", codec::to_json(s.state())}, {"effects", effects_json(effects)}};
    };
    if (op == "advance") return step(codec::event_from(req.at("event")));
    if (op == "submit_questionnaire") {
      return step(Event::submit(req.at("now_ms").get<std::int64_t>(), codec::questionnaire_from(req.at("record"))));
    }
    if (op == "state") {
      return {{"state", codec::to_json(s.state())},
              {"effects", effects_json(s.current_effects())},
              {"last_seq", slot->last_seq},
              {"responses", s.log().responses.size()}};
    }
    if (op == "export") {
      const std::string text = export_session(s.log());
      if (options_.log_dir) write_file(*options_.log_dir / (session_id + ".jsonl"), text);
      return {{"log", text}, {"responses", s.log().responses.size()}};
    }
    if (op == "get_frame") {
      const std::string scene_id = req.at("scene_id").get<std::string>();
      const TrialScene* scene = s.material().find_scene(scene_id);
      if (!scene) throw Error(ErrorKind::domain, "scene '" + scene_id + "' is not part of this session");
      const FrameTarget target = frame_target(req);
      const ImageSize size = frame_size(req, options_);
      const double time_ms = req.value("time_ms", 0.0);
      const HighlightSpec highlight = HighlightSpec::from_scene(*scene);
      RenderOptions ro;
      ro.threads = options_.threads;
      RgbImage image;
      bool flicker_phase = true;
      if (target.eye) {
        RenderedFrame f = render_eye(*scene, derive_eye_view(default_rig(), size, *target.eye), highlight, time_ms, size, ro);
        flicker_phase = f.flicker_phase;
        image = std::move(f.image);
      } else {
        auto [l, r] = render_stereo_pair(*scene, default_rig(), highlight, time_ms, size, ro);
        flicker_phase = l.flicker_phase;
        image = compose(l, r, target.layout);
      }
      json result = frame_result(image, target);
      result["scene_id"] = scene_id;
      result["technique"] = to_string(highlight.technique());
      result["flicker_phase"] = flicker_phase;
      result["time_ms"] = time_ms;
      return result;
    }
    throw Error(ErrorKind::protocol, "op '" + op + "' is not valid for a trial session");
  }

  VolumeWorkspace& w = std::get<VolumeWorkspace>(slot->work);
  if (op == "brush_erase") {
    const std::string mode = req.value("mode", std::string("set"));
    if (mode != "set" && mode != "clear") throw Error(ErrorKind::protocol, "mode must be set or clear");
    const std::size_t changed = brush_erase(w.mask, vec3_from(req.at("center")), req.at("radius").get<double>(), w.grid,
                                            mode == "set" ? BrushMode::set : BrushMode::clear);
    return {{"changed", changed}, {"masked", w.mask.popcount()}};
  }
  if (op == "mask_segment") {
    if (!w.labels) throw Error(ErrorKind::domain, "workspace has no segment labels");
    const int id = req.at("segment").get<int>();
    if (id < 0 || id > 65535) throw Error(ErrorKind::domain, "segment id out of range");
    SegmentMask sm = mask_from_segment(*w.labels, static_cast<std::uint16_t>(id));
    const int grow = req.value("dilate", 0);
    w.mask = grow > 0 ? dilate(sm.mask, grow) : std::move(sm.mask);
    return {{"masked", w.mask.popcount()}, {"id_absent", sm.id_absent}};
  }
  if (op == "clear_mask") {
    w.mask = MaskVolume(w.grid.dims);
    return {{"masked", 0}};
  }
  if (op == "state") return {{"last_seq", slot->last_seq}, {"masked", w.mask.popcount()}, {"deadeye", to_string(w.deadeye)}};
  if (op == "volume_frame") {
    const FrameTarget target = frame_target(req);
    const ImageSize size = frame_size(req, options_);
    RenderSettings settings;
    settings.threads = options_.threads;
    const std::string de = req.value("deadeye", std::string(to_string(w.deadeye)));
    if (de != "off") settings.deadeye = eye_from_string(de);
    if (req.contains("clip") && !req["clip"].is_null()) {
      const json& c = req["clip"];
      if (!c.is_array() || c.size() != 4) throw Error(ErrorKind::protocol, "clip is [nx, ny, nz, offset]");
      settings.clip_plane = ClipPlane{{c[0].get<double>(), c[1].get<double>(), c[2].get<double>()}, c[3].get<double>()};
    }
    if (req.contains("step_mm")) settings.step_length = req["step_mm"].get<double>();
    const StereoRig rig = volume_rig(w.grid, req.value("azimuth", 0.0), req.value("elevation", 0.0));
    const auto views = derive_eye_views(rig, size);
    auto cast = [&](const EyeView& v) { return raycast(w.grid, w.tf, &w.mask, v, settings, size); };
    RgbImage image;
    if (target.eye) {
      image = cast(*target.eye == Eye::left ? views.first : views.second).image;
    } else {
      image = compose(cast(views.first), cast(views.second), target.layout);
    }
    json result = frame_result(image, target);
    result["deadeye"] = de;
    result["masked"] = w.mask.popcount();
    return result;
  }
  throw Error(ErrorKind::protocol, "op '" + op + "' is not valid for a volume session");
}

void serve_lines(Service& service, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out << service.handle_line(line) << '\n';
    out.flush();
  }
}

}  // namespace deadeye
