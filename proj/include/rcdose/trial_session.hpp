#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rcdose/core_model.hpp"

namespace rcdose {

class SessionError : public std::runtime_error {
 public:
  enum class Kind {
    concluded,        // recording on a concluded trial
    disallowed_size,  // cohort size not in the configuration
    bad_dlts,         // DLT count outside 0..size
    overflow,         // mandated dose already full
    nothing_to_undo,
    malformed,        // journal entry cannot be interpreted
    integrity,        // replay disagrees with the recorded state
  };

  SessionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace journal {
struct Created {
  int doses = 0;
  ProtocolConfig config;

  friend bool operator==(const Created&, const Created&) = default;
};
struct CohortRecorded {
  Decision decision = Decision::stay;
  int size = 0;
  int dlts = 0;
  EscalationState state;  // state after enrollment

  friend bool operator==(const CohortRecorded&, const CohortRecorded&) = default;
};
struct Undone {
  std::uint64_t target = 0;  // seq of the withdrawn CohortRecorded entry

  friend bool operator==(const Undone&, const Undone&) = default;
};
}  // namespace journal

struct JournalEntry {
  std::uint64_t seq = 0;
  std::string timestamp;  // UTC, ISO 8601
  std::variant<journal::Created, journal::CohortRecorded, journal::Undone> kind;

  friend bool operator==(const JournalEntry&, const JournalEntry&) = default;
};

/// A live trial. Values are immutable snapshots: every operation returns a new
/// session whose journal extends the old one by exactly the entries it adds.
struct TrialSession {
  std::string id;
  ProtocolConfig config;
  EscalationState initial;
  EscalationState state;
  std::optional<int> recommendation;  // set once concluded
  std::vector<JournalEntry> journal;

  bool concluded() const { return recommendation.has_value(); }
  int doses() const { return static_cast<int>(initial.dose_count()); }
};

struct TrialStatus {
  EscalationState state;
  Decision next_decision = Decision::stop;
  std::optional<int> recommendation;
  std::set<int> reachable_recommendations;
  std::size_t journal_entries = 0;
  std::size_t cohorts_recorded = 0;  // effective, i.e. not undone
};

/// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp();

TrialSession create_trial(const ProtocolConfig& config, int doses, std::string id);

/// Applies the mandated decision with an observed cohort outcome.
TrialSession record_cohort(const TrialSession& session, int size, int dlts);

/// Withdraws the most recent effective cohort; the journal only grows.
TrialSession undo_last(const TrialSession& session);

TrialStatus trial_status(const TrialSession& session);

/// Rebuilds a session from its journal. Throws SessionError (malformed or
/// integrity) when the entries are inconsistent. When `expected` is given the
/// created entry's configuration must equal it.
TrialSession replay_journal(const std::vector<JournalEntry>& entries, std::string id,
                            const std::optional<ProtocolConfig>& expected = std::nullopt);

/// Effective cohort records in order, after undo entries are applied.
std::vector<journal::CohortRecorded> effective_records(const TrialSession& session);

/// The decision/state events realised so far, closed by stop and the
/// recommendation when the trial has concluded.
TrialPath realized_path(const TrialSession& session);

}  // namespace rcdose
