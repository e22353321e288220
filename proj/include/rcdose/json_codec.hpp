#pragma once

// Machine-readable forms. Field names are part of the API contract:
//   tally     {"t":1,"n":6}
//   state     {"lower":[tally...],"higher":[tally...],"text":"[1/6]-[0/0]"}
//   decision  "esc" | "sta" | "des" | "stop"
//   config    {"cohort_sizes":[3],"max_denominator":6,"max_doses":8,"regret_rules":{...}}
//   journal   one object per line, {"seq":..,"timestamp":..,"kind":..., ...}
// "text" is emitted for convenience and ignored on input.

#include <json.hpp>

#include "rcdose/core_model.hpp"
#include "rcdose/property_verifier.hpp"
#include "rcdose/trial_session.hpp"

namespace rcdose {

using Json = nlohmann::json;

void to_json(Json& j, const Tally& q);
void from_json(const Json& j, Tally& q);
void to_json(Json& j, const EscalationState& s);
void from_json(const Json& j, EscalationState& s);
void to_json(Json& j, const Decision& d);
void from_json(const Json& j, Decision& d);
void to_json(Json& j, const RegretRuleSet& r);
void from_json(const Json& j, RegretRuleSet& r);
void to_json(Json& j, const ProtocolConfig& c);
void from_json(const Json& j, ProtocolConfig& c);
void to_json(Json& j, const TrialPath& p);
void to_json(Json& j, const PropertyReport& r);
void to_json(Json& j, const JournalEntry& e);
void from_json(const Json& j, JournalEntry& e);
void to_json(Json& j, const TrialStatus& st);

/// Full session view served to clients: status plus identity and journal.
Json session_json(const TrialSession& session);

/// Reads a configuration object, filling absent fields with defaults, and
/// validates it.
ProtocolConfig config_from_json(const Json& j);

}  // namespace rcdose
