#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rcdose {

/// Raised when a value violates a domain invariant (tally bounds, dose count,
/// cohort sizes). The message names the violated bound.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for requests the protocol structure cannot honour, e.g. escalating
/// from the top dose or enrolling past the denominator cap.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Cumulative toxicity tally: `t` DLTs among `n` patients at one dose.
/// A bare Tally is not necessarily valid; anticipated outcomes may exceed the
/// denominator cap and are still evaluated by the regret clauses.
struct Tally {
  int t = 0;
  int n = 0;

  friend constexpr auto operator<=>(const Tally&, const Tally&) = default;
};

enum class Decision { escalate, stay, deescalate, stop };

inline constexpr Decision kContinuingDecisions[] = {
    Decision::escalate, Decision::stay, Decision::deescalate};

/// Short protocol name: esc, sta, des, stop.
const char* decision_name(Decision d);
/// Inverse of decision_name; throws ValidationError on an unknown name.
Decision decision_from_name(const std::string& name);

struct RegretRuleSet;  // protocol_engine.hpp

/// Escalation state as a zipper over the dose ladder. `lower` is in descending
/// dose order with the current dose at its head; `higher` is ascending with the
/// next-higher dose at its head.
struct EscalationState {
  std::vector<Tally> lower;
  std::vector<Tally> higher;

  std::size_t dose_count() const { return lower.size() + higher.size(); }
  /// 1-based index of the current dose; 0 when `lower` is empty.
  int current_dose() const { return static_cast<int>(lower.size()); }
  const Tally& current() const { return lower.front(); }

  friend auto operator<=>(const EscalationState&, const EscalationState&) = default;
  friend bool operator==(const EscalationState&, const EscalationState&) = default;
};

struct Recommendation {
  int dose = 0;  // 0 means no dose recommended

  friend constexpr auto operator<=>(const Recommendation&, const Recommendation&) = default;
};

using PathEvent = std::variant<Decision, EscalationState, Recommendation>;

/// One complete trial: alternating decision/state events, closed by
/// `stop` and a recommendation.
struct TrialPath {
  std::vector<PathEvent> events;

  friend bool operator==(const TrialPath&, const TrialPath&) = default;
};

/// Decision-rule parameters. Thresholds are rates expressed as t*den vs n.
struct RegretRuleSet {
  // Escalation is justified by the current dose having at least
  // `esc_min_prior_n` patients and rate <= 1/`esc_rate_den`.
  bool escalation_justification = true;
  int esc_min_prior_n = 3;
  int esc_rate_den = 6;

  // Regret de-escalating from a moderately toxic tally into a dose that then
  // shows a rate below 1/`des_rate_den`.
  bool deescalation_clause = true;
  int des_max_prior_t = 1;
  int des_min_prior_n = 3;
  int des_rate_den = 6;

  // Regret any decision whose outcome reaches `dlt_cap` DLTs at one dose.
  bool dlt_cap_clause = true;
  int dlt_cap = 5;

  // A stopped trial recommends its current dose when t*den <= n there,
  // otherwise the dose below.
  int rec_rate_den = 6;

  friend bool operator==(const RegretRuleSet&, const RegretRuleSet&) = default;
};

struct ProtocolConfig {
  std::vector<int> cohort_sizes{3};
  int max_denominator = 6;
  int max_doses = 8;
  RegretRuleSet regret_rules{};

  /// Throws ValidationError when a field is out of range.
  void validate() const;
  bool allows_cohort_size(int size) const;

  friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

Tally validate_tally(int t, int n, const ProtocolConfig& config = {});
bool is_valid_tally(const Tally& q, const ProtocolConfig& config = {});

/// Throws ValidationError naming the first violation.
void validate_state(const EscalationState& state, const ProtocolConfig& config = {});
bool is_valid_state(const EscalationState& state, const ProtocolConfig& config = {});

/// Builds the zipper from an ascending tally list with a 1-based current dose.
EscalationState make_state(std::vector<Tally> tallies, int current_index,
                           const ProtocolConfig& config = {});

/// Ascending-dose flat list: reverse(lower) ++ higher.
std::vector<Tally> state_tallies(const EscalationState& state,
                                 const ProtocolConfig& config = {});

/// All-zero state with `doses` doses and dose 1 current.
EscalationState initial_state(int doses, const ProtocolConfig& config = {});

/// Checks alternation and the single trailing recommendation.
bool is_well_formed(const TrialPath& path);

}  // namespace rcdose
