#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "deadeye/runner/session.hpp"

namespace deadeye {

inline constexpr int kSessionFormatVersion = 1;

// Line-delimited JSON. The first line is a header:
//   {"checksum":"<crc32 hex>","format":"deadeye-session-log","format_version":1,
//    "plan":{...},"records":N,"start_ms":T}
// followed by N record lines, each an object with a "type" of event,
// transition, response or questionnaire, in that grouping and in log order.
// The checksum is CRC-32 over the header serialized without its checksum
// field, a newline, and every record line with its newline.
std::string export_session(const SessionLog& log);
void export_session(const std::filesystem::path& path, const SessionLog& log);

/// Throws a format error naming the checksum when the content was altered.
SessionLog import_session(const std::string& text);
SessionLog import_session_file(const std::filesystem::path& path);

/// Loads every *.jsonl file in a directory (sorted by name) or a single file.
std::vector<SessionLog> load_session_logs(const std::filesystem::path& path);

}  // namespace deadeye
