#pragma once

#include <vector>

#include "rcdose/core_model.hpp"

namespace rcdose {

/// Anticipated tally pair for one outcome of a decision: the tally that would
/// result, and the current-dose tally the decision was taken from.
struct DecisionHistory {
  Tally result;
  Tally prior;

  friend constexpr bool operator==(const DecisionHistory&, const DecisionHistory&) = default;
};

/// One realised enrollment: the cohort size, its DLT count and the new state.
struct Transition {
  int size = 0;
  int dlts = 0;
  EscalationState state;
};

/// [size/size, ..., 0/size], descending DLT count.
std::vector<Tally> cohort_outcomes(int size);

/// Every tally that enrolling one more cohort could produce from `prior`,
/// sizes in config order, DLTs descending within each size. Outcomes are not
/// clipped at max_denominator: the regret clauses range over all of them.
std::vector<Tally> outcome_tallies(const Tally& prior, const ProtocolConfig& config);

/// The enrollment relation: outcome_tallies restricted to n <= max_denominator.
std::vector<Tally> enroll_transitions(const Tally& prior, const ProtocolConfig& config);

/// Enrolls an observed cohort under `decision`. Throws ProtocolError when the
/// decision is structurally impossible, the size is not allowed or the
/// denominator would overflow; ValidationError on a bad DLT count.
EscalationState apply_decision(const EscalationState& state, Decision decision,
                               int observed_size, int observed_dlts,
                               const ProtocolConfig& config = {});

/// All transitions for `decision`, in outcome order. Empty when infeasible.
std::vector<Transition> successors(const EscalationState& state, Decision decision,
                                   const ProtocolConfig& config = {});

/// True iff no valid successor state exists for `decision`.
bool infeasible(const EscalationState& state, Decision decision,
                const ProtocolConfig& config = {});

/// The explicit infeasibility clauses: no dose to move to, or the dose that
/// would be enrolled is already at max_denominator. Agrees with infeasible()
/// whenever every dose's n is reachable by the configured cohort sizes.
bool infeasible_by_rule(const EscalationState& state, Decision decision,
                        const ProtocolConfig& config = {});

std::vector<DecisionHistory> decision_histories(const EscalationState& state, Decision decision,
                                                const ProtocolConfig& config = {});

bool regrets(Decision decision, const DecisionHistory& history,
             const RegretRuleSet& rules = {});

/// Anticipatory regret: some outcome of `decision` would be regretted.
bool regrettable(const EscalationState& state, Decision decision,
                 const ProtocolConfig& config = {});

/// First of esc, sta, des that is neither infeasible nor regrettable; stop
/// otherwise.
Decision next_decision(const EscalationState& state, const ProtocolConfig& config = {});

int stop_recommendation(const EscalationState& state, const RegretRuleSet& rules = {});

}  // namespace rcdose
