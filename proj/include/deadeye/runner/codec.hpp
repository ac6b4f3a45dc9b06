#pragma once

// JSON encodings shared by the session log files and the service protocol.

#include <json.hpp>

#include "deadeye/runner/session.hpp"

namespace deadeye::codec {

using nlohmann::json;

json to_json(const Block& b);
Block block_from(const json& j);
json to_json(const SessionPlan& p);
SessionPlan plan_from(const json& j);
json to_json(const QuestionnaireRecord& q);
QuestionnaireRecord questionnaire_from(const json& j);
json to_json(const ResponseRecord& r);
ResponseRecord response_from(const json& j);
json to_json(const Event& e);
Event event_from(const json& j);
json to_json(const Transition& t);
Transition transition_from(const json& j);
json to_json(const Effect& e);
json to_json(const SessionState& s);

/// 64-bit seeds travel as decimal strings; numbers are accepted on input.
json seed_json(std::uint64_t seed);
std::uint64_t seed_from(const json& j);

}  // namespace deadeye::codec
