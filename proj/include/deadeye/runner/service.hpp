#pragma once

// Line-oriented request/response service that hosts trial sessions and
// volume workspaces. The wire format is documented in docs/protocol.md.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "deadeye/geometry/stereo.hpp"

namespace deadeye {

inline constexpr const char* kProtocolName = "deadeye-rpc";
inline constexpr int kProtocolVersion = 1;

struct ServiceOptions {
  unsigned threads = 1;
  ImageSize default_frame{512, 512};
  int max_frame_side = 4096;
  /// When set, `export` also writes <log_dir>/<session_id>.jsonl.
  std::optional<std::filesystem::path> log_dir;
};

class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Handles one request object. Never throws; failures come back as
  /// {"ok": false, "error": {...}}.
  nlohmann::json handle(const nlohmann::json& request);
  /// Same over one text line.
  std::string handle_line(const std::string& line);

  std::size_t session_count() const;

 private:
  struct Slot;
  nlohmann::json dispatch(const nlohmann::json& request);
  std::shared_ptr<Slot> find(const std::string& session_id) const;

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
};

/// Reads requests line by line until EOF, writing one response line each.
void serve_lines(Service& service, std::istream& in, std::ostream& out);

}  // namespace deadeye
