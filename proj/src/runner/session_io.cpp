#include "deadeye/runner/session_io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "deadeye/core/error.hpp"
#include "deadeye/core/image.hpp"
#include "deadeye/runner/codec.hpp"

namespace deadeye {

using nlohmann::json;

namespace {

constexpr const char* kFormatName = "deadeye-session-log";

std::string hex32(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::vector<std::string> body_lines(const SessionLog& log) {
  std::vector<std::string> lines;
  auto add = [&](const char* type, json j) {
    j["type"] = type;
    lines.push_back(j.dump());
  };
  for (const Event& e : log.events) add("event", codec::to_json(e));
  for (const Transition& t : log.transitions) add("transition", codec::to_json(t));
  for (const ResponseRecord& r : log.responses) add("response", codec::to_json(r));
  for (const QuestionnaireRecord& q : log.questionnaires) add("questionnaire", codec::to_json(q));
  return lines;
}

std::uint32_t checksum(const std::string& header_without_checksum, const std::vector<std::string>& lines) {
  std::string payload = header_without_checksum + "\n";
  for (const std::string& l : lines) payload += l + "\n";
  return crc32_of(payload);
}

}  // namespace

std::string export_session(const SessionLog& log) {
  const std::vector<std::string> lines = body_lines(log);
  json header = {{"format", kFormatName},
                 {"format_version", kSessionFormatVersion},
                 {"plan", codec::to_json(log.plan)},
                 {"start_ms", log.start_ms},
                 {"records", lines.size()}};
  header["checksum"] = hex32(checksum(header.dump(), lines));
  std::string out = header.dump() + "\n";
  for (const std::string& l : lines) out += l + "\n";
  return out;
}

void export_session(const std::filesystem::path& path, const SessionLog& log) { write_file(path, export_session(log)); }

SessionLog import_session(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
  }
  if (lines.empty()) throw Error(ErrorKind::format, "session log is empty");
  if (text.back() != '\n') throw Error(ErrorKind::format, "session log checksum mismatch: truncated final line");

  json header;
  try {
    header = json::parse(lines[0]);
  } catch (const json::exception&) {
    throw Error(ErrorKind::format, "session log checksum mismatch: header line is not valid JSON");
  }
  if (!header.is_object() || !header.contains("checksum") || !header["checksum"].is_string()) {
    throw Error(ErrorKind::format, "session log checksum mismatch: header carries no checksum");
  }
  const std::string stored = header["checksum"].get<std::string>();
  header.erase("checksum");
  const std::vector<std::string> body(lines.begin() + 1, lines.end());
  const std::string actual = hex32(checksum(header.dump(), body));
  if (stored != actual) {
    throw Error(ErrorKind::format, "session log checksum mismatch: stored " + stored + ", computed " + actual);
  }

  try {
    if (header.at("format").get<std::string>() != kFormatName) throw Error(ErrorKind::format, "not a session log");
    const int version = header.at("format_version").get<int>();
    if (version != kSessionFormatVersion) {
      throw Error(ErrorKind::format, "unsupported session log format_version " + std::to_string(version));
    }
    if (header.at("records").get<std::size_t>() != body.size()) {
      throw Error(ErrorKind::format, "session log record count does not match the header");
    }
    SessionLog log;
    log.plan = codec::plan_from(header.at("plan"));
    log.start_ms = header.at("start_ms").get<std::int64_t>();
    for (const std::string& l : body) {
      const json j = json::parse(l);
      const std::string type = j.at("type").get<std::string>();
      if (type == "event") {
        log.events.push_back(codec::event_from(j));
      } else if (type == "transition") {
        log.transitions.push_back(codec::transition_from(j));
      } else if (type == "response") {
        log.responses.push_back(codec::response_from(j));
      } else if (type == "questionnaire") {
        log.questionnaires.push_back(codec::questionnaire_from(j));
      } else {
        throw Error(ErrorKind::format, "unknown record type '" + type + "'");
      }
    }
    return log;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::format, std::string("session log: ") + e.what());
  }
}

SessionLog import_session_file(const std::filesystem::path& path) {
  try {
    return import_session(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::vector<SessionLog> load_session_logs(const std::filesystem::path& path) {
  std::vector<SessionLog> logs;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) logs.push_back(import_session_file(f));
  } else {
    logs.push_back(import_session_file(path));
  }
  return logs;
}

}  // namespace deadeye
