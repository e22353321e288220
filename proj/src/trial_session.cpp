#include "rcdose/trial_session.hpp"

#include <chrono>
#include <ctime>

#include "rcdose/canonical_text.hpp"
#include "rcdose/path_explorer.hpp"
#include "rcdose/protocol_engine.hpp"

namespace rcdose {

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

namespace {

std::uint64_t next_seq(const TrialSession& s) {
  return s.journal.empty() ? 1 : s.journal.back().seq + 1;
}

void refresh_status(TrialSession& s) {
  s.recommendation.reset();
  if (next_decision(s.state, s.config) == Decision::stop)
    s.recommendation = stop_recommendation(s.state, s.config.regret_rules);
}

// The transition record_cohort would make, with errors classified.
journal::CohortRecorded enroll(const TrialSession& s, int size, int dlts) {
  if (s.concluded())
    throw SessionError(SessionError::Kind::concluded,
                       "trial concluded with recommend_dose(" +
                           std::to_string(*s.recommendation) + ")");
  if (!s.config.allows_cohort_size(size))
    throw SessionError(SessionError::Kind::disallowed_size,
                       "cohort size " + std::to_string(size) + " is not allowed");
  if (dlts < 0 || dlts > size)
    throw SessionError(SessionError::Kind::bad_dlts,
                       "dlts " + std::to_string(dlts) + " outside 0.." + std::to_string(size));
  const Decision d = next_decision(s.state, s.config);
  try {
    return {d, size, dlts, apply_decision(s.state, d, size, dlts, s.config)};
  } catch (const ProtocolError& e) {
    throw SessionError(SessionError::Kind::overflow, e.what());
  }
}

// Seqs of cohort records not withdrawn by a later undo, oldest first.
std::vector<std::uint64_t> live_seqs(const std::vector<JournalEntry>& journal) {
  std::vector<std::uint64_t> live;
  for (const JournalEntry& e : journal) {
    if (std::holds_alternative<journal::CohortRecorded>(e.kind))
      live.push_back(e.seq);
    else if (std::holds_alternative<journal::Undone>(e.kind) && !live.empty())
      live.pop_back();
  }
  return live;
}

}  // namespace

TrialSession create_trial(const ProtocolConfig& config, int doses, std::string id) {
  config.validate();
  TrialSession s;
  s.id = std::move(id);
  s.config = config;
  s.initial = initial_state(doses, config);
  s.state = s.initial;
  s.journal.push_back({1, utc_timestamp(), journal::Created{doses, config}});
  refresh_status(s);
  return s;
}

TrialSession record_cohort(const TrialSession& session, int size, int dlts) {
  journal::CohortRecorded rec = enroll(session, size, dlts);
  TrialSession s = session;
  s.state = rec.state;
  s.journal.push_back({next_seq(session), utc_timestamp(), std::move(rec)});
  refresh_status(s);
  return s;
}

std::vector<journal::CohortRecorded> effective_records(const TrialSession& session) {
  std::vector<std::pair<std::uint64_t, journal::CohortRecorded>> live;
  for (const JournalEntry& e : session.journal) {
    if (const auto* r = std::get_if<journal::CohortRecorded>(&e.kind)) {
      live.emplace_back(e.seq, *r);
    } else if (const auto* u = std::get_if<journal::Undone>(&e.kind)) {
      if (!live.empty() && live.back().first == u->target) live.pop_back();
    }
  }
  std::vector<journal::CohortRecorded> out;
  for (auto& [seq, r] : live) out.push_back(std::move(r));
  return out;
}

TrialSession undo_last(const TrialSession& session) {
  const auto live = live_seqs(session.journal);
  if (live.empty())
    throw SessionError(SessionError::Kind::nothing_to_undo, "nothing to undo");
  TrialSession s = session;
  s.journal.push_back({next_seq(session), utc_timestamp(), journal::Undone{live.back()}});
  const auto records = effective_records(s);
  s.state = records.empty() ? s.initial : records.back().state;
  refresh_status(s);
  return s;
}

TrialStatus trial_status(const TrialSession& session) {
  TrialStatus st;
  st.state = session.state;
  st.next_decision = next_decision(session.state, session.config);
  st.recommendation = session.recommendation;
  st.reachable_recommendations = reachable_recommendations(session.state, std::nullopt,
                                                           session.config);
  st.journal_entries = session.journal.size();
  st.cohorts_recorded = effective_records(session).size();
  return st;
}

TrialSession replay_journal(const std::vector<JournalEntry>& entries, std::string id,
                            const std::optional<ProtocolConfig>& expected) {
  using Kind = SessionError::Kind;
  if (entries.empty()) throw SessionError(Kind::malformed, "empty journal");
  const auto* created = std::get_if<journal::Created>(&entries.front().kind);
  if (!created) throw SessionError(Kind::malformed, "journal does not start with a created entry");
  if (expected && *expected != created->config)
    throw SessionError(Kind::integrity, "journal configuration differs from the expected one");

  TrialSession s;
  try {
    s = create_trial(created->config, created->doses, std::move(id));
  } catch (const ValidationError& e) {
    throw SessionError(Kind::malformed, std::string("created entry: ") + e.what());
  }
  s.journal = {entries.front()};
  std::vector<EscalationState> trail{s.initial};  // state after each effective record

  for (std::size_t i = 1; i < entries.size(); ++i) {
    const JournalEntry& e = entries[i];
    if (e.seq <= s.journal.back().seq)
      throw SessionError(Kind::malformed, "journal seq " + std::to_string(e.seq) +
                                              " is not increasing");
    if (const auto* r = std::get_if<journal::CohortRecorded>(&e.kind)) {
      journal::CohortRecorded redo;
      try {
        redo = enroll(s, r->size, r->dlts);
      } catch (const SessionError& err) {
        throw SessionError(Kind::integrity,
                           "entry " + std::to_string(e.seq) + " cannot be replayed: " + err.what());
      }
      if (redo.decision != r->decision || redo.state != r->state)
        throw SessionError(Kind::integrity,
                           "entry " + std::to_string(e.seq) + " records " +
                               decision_name(r->decision) + " to " + print_state(r->state) +
                               " but replay gives " + decision_name(redo.decision) + " to " +
                               print_state(redo.state));
      s.state = redo.state;
      trail.push_back(s.state);
    } else if (const auto* u = std::get_if<journal::Undone>(&e.kind)) {
      const auto live = live_seqs(s.journal);
      if (live.empty() || u->target != live.back())
        throw SessionError(Kind::integrity, "entry " + std::to_string(e.seq) +
                                                " undoes " + std::to_string(u->target) +
                                                ", which is not the latest effective record");
      trail.pop_back();
      s.state = trail.back();
    } else {
      throw SessionError(Kind::malformed, "second created entry at seq " + std::to_string(e.seq));
    }
    s.journal.push_back(e);
    refresh_status(s);
  }
  return s;
}

TrialPath realized_path(const TrialSession& session) {
  TrialPath path;
  for (const auto& r : effective_records(session)) {
    path.events.emplace_back(r.decision);
    path.events.emplace_back(r.state);
  }
  if (session.recommendation) {
    path.events.emplace_back(Decision::stop);
    path.events.emplace_back(Recommendation{*session.recommendation});
  }
  return path;
}

}  // namespace rcdose
