#include "rcdose/json_codec.hpp"

#include "rcdose/canonical_text.hpp"

namespace rcdose {

void to_json(Json& j, const Tally& q) { j = Json{{"t", q.t}, {"n", q.n}}; }

void from_json(const Json& j, Tally& q) {
  q.t = j.at("t").get<int>();
  q.n = j.at("n").get<int>();
}

void to_json(Json& j, const EscalationState& s) {
  j = Json{{"lower", s.lower}, {"higher", s.higher}, {"text", print_state(s)}};
}

void from_json(const Json& j, EscalationState& s) {
  s.lower = j.at("lower").get<std::vector<Tally>>();
  s.higher = j.at("higher").get<std::vector<Tally>>();
}

void to_json(Json& j, const Decision& d) { j = decision_name(d); }

void from_json(const Json& j, Decision& d) { d = decision_from_name(j.get<std::string>()); }

void to_json(Json& j, const RegretRuleSet& r) {
  j = Json{{"escalation_justification", r.escalation_justification},
           {"esc_min_prior_n", r.esc_min_prior_n},
           {"esc_rate_den", r.esc_rate_den},
           {"deescalation_clause", r.deescalation_clause},
           {"des_max_prior_t", r.des_max_prior_t},
           {"des_min_prior_n", r.des_min_prior_n},
           {"des_rate_den", r.des_rate_den},
           {"dlt_cap_clause", r.dlt_cap_clause},
           {"dlt_cap", r.dlt_cap},
           {"rec_rate_den", r.rec_rate_den}};
}

void from_json(const Json& j, RegretRuleSet& r) {
  RegretRuleSet d;
  r.escalation_justification = j.value("escalation_justification", d.escalation_justification);
  r.esc_min_prior_n = j.value("esc_min_prior_n", d.esc_min_prior_n);
  r.esc_rate_den = j.value("esc_rate_den", d.esc_rate_den);
  r.deescalation_clause = j.value("deescalation_clause", d.deescalation_clause);
  r.des_max_prior_t = j.value("des_max_prior_t", d.des_max_prior_t);
  r.des_min_prior_n = j.value("des_min_prior_n", d.des_min_prior_n);
  r.des_rate_den = j.value("des_rate_den", d.des_rate_den);
  r.dlt_cap_clause = j.value("dlt_cap_clause", d.dlt_cap_clause);
  r.dlt_cap = j.value("dlt_cap", d.dlt_cap);
  r.rec_rate_den = j.value("rec_rate_den", d.rec_rate_den);
}

void to_json(Json& j, const ProtocolConfig& c) {
  j = Json{{"cohort_sizes", c.cohort_sizes},
           {"max_denominator", c.max_denominator},
           {"max_doses", c.max_doses},
           {"regret_rules", c.regret_rules}};
}

void from_json(const Json& j, ProtocolConfig& c) {
  ProtocolConfig d;
  c.cohort_sizes = j.value("cohort_sizes", d.cohort_sizes);
  c.max_denominator = j.value("max_denominator", d.max_denominator);
  c.max_doses = j.value("max_doses", d.max_doses);
  c.regret_rules = j.contains("regret_rules") ? j.at("regret_rules").get<RegretRuleSet>()
                                              : d.regret_rules;
}

ProtocolConfig config_from_json(const Json& j) {
  ProtocolConfig c = j.get<ProtocolConfig>();
  c.validate();
  return c;
}

void to_json(Json& j, const TrialPath& p) {
  Json events = Json::array();
  for (const PathEvent& e : p.events) {
    if (const auto* d = std::get_if<Decision>(&e))
      events.push_back({{"decision", *d}});
    else if (const auto* s = std::get_if<EscalationState>(&e))
      events.push_back({{"state", *s}});
    else
      events.push_back({{"recommend_dose", std::get<Recommendation>(e).dose}});
  }
  j = Json{{"text", print_path(p)}, {"events", std::move(events)}};
}

void to_json(Json& j, const PropertyReport& r) {
  Json cex = Json::array();
  for (const Counterexample& c : r.counterexamples)
    cex.push_back({{"doses", c.doses}, {"path", print_path(c.path)}, {"detail", c.detail}});
  j = Json{{"property", r.property_name},
           {"holds", r.holds()},
           {"doses_checked", r.doses_checked},
           {"paths_examined", r.paths_examined},
           {"states_examined", r.states_examined},
           {"elapsed_ms", std::chrono::duration<double, std::milli>(r.elapsed).count()},
           {"counterexamples", std::move(cex)}};
}

void to_json(Json& j, const JournalEntry& e) {
  j = Json{{"seq", e.seq}, {"timestamp", e.timestamp}};
  if (const auto* c = std::get_if<journal::Created>(&e.kind)) {
    j["kind"] = "created";
    j["doses"] = c->doses;
    j["config"] = c->config;
  } else if (const auto* r = std::get_if<journal::CohortRecorded>(&e.kind)) {
    j["kind"] = "cohort_recorded";
    j["decision"] = r->decision;
    j["size"] = r->size;
    j["dlts"] = r->dlts;
    j["state"] = r->state;
  } else {
    j["kind"] = "undone";
    j["target"] = std::get<journal::Undone>(e.kind).target;
  }
}

void from_json(const Json& j, JournalEntry& e) {
  e.seq = j.at("seq").get<std::uint64_t>();
  e.timestamp = j.value("timestamp", std::string{});
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "created") {
    e.kind = journal::Created{j.at("doses").get<int>(), j.at("config").get<ProtocolConfig>()};
  } else if (kind == "cohort_recorded") {
    e.kind = journal::CohortRecorded{j.at("decision").get<Decision>(), j.at("size").get<int>(),
                                     j.at("dlts").get<int>(),
                                     j.at("state").get<EscalationState>()};
  } else if (kind == "undone") {
    e.kind = journal::Undone{j.at("target").get<std::uint64_t>()};
  } else {
    throw SessionError(SessionError::Kind::malformed, "unknown journal entry kind '" + kind + "'");
  }
}

void to_json(Json& j, const TrialStatus& st) {
  j = Json{{"state", st.state},
           {"next_decision", st.next_decision},
           {"status", st.recommendation ? "concluded" : "active"},
           {"recommendation", st.recommendation ? Json(*st.recommendation) : Json(nullptr)},
           {"reachable_recommendations", st.reachable_recommendations},
           {"journal_entries", st.journal_entries},
           {"cohorts_recorded", st.cohorts_recorded}};
}

Json session_json(const TrialSession& session) {
  Json j = trial_status(session);
  j["id"] = session.id;
  j["doses"] = session.doses();
  j["cohort_sizes"] = session.config.cohort_sizes;
  j["config"] = session.config;
  j["journal"] = session.journal;
  j["path"] = print_path(realized_path(session));
  return j;
}

}  // namespace rcdose
