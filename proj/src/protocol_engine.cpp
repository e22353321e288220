#include "rcdose/protocol_engine.hpp"

#include <string>

namespace rcdose {
namespace {

void require_continuing(Decision d) {
  if (d == Decision::stop) throw ProtocolError("stop has no enrollment");
}

// The tally enrolled by `decision`, or nullptr when there is no such dose.
const Tally* enrolled_dose(const EscalationState& s, Decision decision) {
  switch (decision) {
    case Decision::escalate:
      return s.higher.empty() || s.lower.empty() ? nullptr : &s.higher.front();
    case Decision::stay:
      return s.lower.empty() ? nullptr : &s.lower.front();
    case Decision::deescalate:
      return s.lower.size() < 2 ? nullptr : &s.lower[1];
    case Decision::stop:
      break;
  }
  return nullptr;
}

const Tally& enrolled_or_throw(const EscalationState& s, Decision decision) {
  require_continuing(decision);
  const Tally* q = enrolled_dose(s, decision);
  if (!q)
    throw ProtocolError(std::string("cannot ") + decision_name(decision) +
                        " from this state: no such dose");
  return *q;
}

EscalationState place(const EscalationState& s, Decision decision, const Tally& enrolled) {
  EscalationState out = s;
  switch (decision) {
    case Decision::escalate:
      out.higher.erase(out.higher.begin());
      out.lower.insert(out.lower.begin(), enrolled);
      break;
    case Decision::stay:
      out.lower.front() = enrolled;
      break;
    case Decision::deescalate:
      out.higher.insert(out.higher.begin(), out.lower.front());
      out.lower.erase(out.lower.begin());
      out.lower.front() = enrolled;
      break;
    case Decision::stop:
      break;
  }
  return out;
}

}  // namespace

std::vector<Tally> cohort_outcomes(int size) {
  if (size < 1) throw ValidationError("cohort size " + std::to_string(size) + " < 1");
  std::vector<Tally> out;
  out.reserve(size + 1);
  for (int t = size; t >= 0; --t) out.push_back({t, size});
  return out;
}

std::vector<Tally> outcome_tallies(const Tally& prior, const ProtocolConfig& config) {
  validate_tally(prior.t, prior.n, config);
  std::vector<Tally> out;
  for (int c : config.cohort_sizes)
    for (const Tally& q : cohort_outcomes(c)) out.push_back({prior.t + q.t, prior.n + q.n});
  return out;
}

std::vector<Tally> enroll_transitions(const Tally& prior, const ProtocolConfig& config) {
  std::vector<Tally> out;
  for (const Tally& q : outcome_tallies(prior, config))
    if (q.n <= config.max_denominator) out.push_back(q);
  return out;
}

EscalationState apply_decision(const EscalationState& state, Decision decision,
                               int observed_size, int observed_dlts,
                               const ProtocolConfig& config) {
  validate_state(state, config);
  const Tally& from = enrolled_or_throw(state, decision);
  if (!config.allows_cohort_size(observed_size))
    throw ProtocolError("cohort size " + std::to_string(observed_size) + " is not allowed");
  if (observed_dlts < 0 || observed_dlts > observed_size)
    throw ValidationError("dlts " + std::to_string(observed_dlts) + " outside 0.." +
                          std::to_string(observed_size));
  Tally enrolled{from.t + observed_dlts, from.n + observed_size};
  if (enrolled.n > config.max_denominator)
    throw ProtocolError("enrolling " + std::to_string(observed_size) + " would give n = " +
                        std::to_string(enrolled.n) + " > max_denominator " +
                        std::to_string(config.max_denominator));
  return place(state, decision, enrolled);
}

std::vector<Transition> successors(const EscalationState& state, Decision decision,
                                   const ProtocolConfig& config) {
  std::vector<Transition> out;
  const Tally* from = decision == Decision::stop ? nullptr : enrolled_dose(state, decision);
  if (!from) return out;
  for (int c : config.cohort_sizes) {
    if (from->n + c > config.max_denominator) continue;
    for (int k = c; k >= 0; --k)
      out.push_back({c, k, place(state, decision, Tally{from->t + k, from->n + c})});
  }
  return out;
}

bool infeasible(const EscalationState& state, Decision decision, const ProtocolConfig& config) {
  require_continuing(decision);
  const Tally* from = enrolled_dose(state, decision);
  if (!from) return true;
  for (int c : config.cohort_sizes)
    if (from->n + c <= config.max_denominator) return false;
  return true;
}

bool infeasible_by_rule(const EscalationState& state, Decision decision,
                        const ProtocolConfig& config) {
  require_continuing(decision);
  const Tally* from = enrolled_dose(state, decision);
  return !from || from->n >= config.max_denominator;
}

std::vector<DecisionHistory> decision_histories(const EscalationState& state, Decision decision,
                                                const ProtocolConfig& config) {
  const Tally& enrolled = enrolled_or_throw(state, decision);
  const Tally& prior = state.current();
  std::vector<DecisionHistory> out;
  for (const Tally& q : outcome_tallies(enrolled, config)) out.push_back({q, prior});
  return out;
}

bool regrets(Decision decision, const DecisionHistory& h, const RegretRuleSet& rules) {
  require_continuing(decision);
  const Tally& prior = h.prior;
  const Tally& result = h.result;
  if (rules.dlt_cap_clause && result.t >= rules.dlt_cap) return true;
  switch (decision) {
    case Decision::escalate:
      return rules.escalation_justification &&
             !(prior.n >= rules.esc_min_prior_n && prior.t * rules.esc_rate_den <= prior.n);
    case Decision::deescalate:
      return rules.deescalation_clause && prior.t <= rules.des_max_prior_t &&
             prior.n >= rules.des_min_prior_n && result.n > 0 &&
             result.t * rules.des_rate_den < result.n;
    default:
      return false;
  }
}

bool regrettable(const EscalationState& state, Decision decision, const ProtocolConfig& config) {
  for (const DecisionHistory& h : decision_histories(state, decision, config))
    if (regrets(decision, h, config.regret_rules)) return true;
  return false;
}

Decision next_decision(const EscalationState& state, const ProtocolConfig& config) {
  for (Decision d : kContinuingDecisions)
    if (!infeasible(state, d, config) && !regrettable(state, d, config)) return d;
  return Decision::stop;
}

int stop_recommendation(const EscalationState& state, const RegretRuleSet& rules) {
  if (state.lower.empty()) return 0;
  const Tally& q = state.current();
  const int below = static_cast<int>(state.lower.size()) - 1;
  return q.t * rules.rec_rate_den > q.n ? below : below + 1;
}

}  // namespace rcdose
