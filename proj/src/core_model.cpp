#include "rcdose/core_model.hpp"

#include <algorithm>

namespace rcdose {

const char* decision_name(Decision d) {
  switch (d) {
    case Decision::escalate: return "esc";
    case Decision::stay: return "sta";
    case Decision::deescalate: return "des";
    case Decision::stop: return "stop";
  }
  return "?";
}

Decision decision_from_name(const std::string& name) {
  if (name == "esc") return Decision::escalate;
  if (name == "sta") return Decision::stay;
  if (name == "des") return Decision::deescalate;
  if (name == "stop") return Decision::stop;
  throw ValidationError("unknown decision '" + name + "'");
}

void ProtocolConfig::validate() const {
  if (cohort_sizes.empty()) throw ValidationError("cohort_sizes must not be empty");
  for (int c : cohort_sizes)
    if (c < 1) throw ValidationError("cohort size " + std::to_string(c) + " < 1");
  int largest = *std::max_element(cohort_sizes.begin(), cohort_sizes.end());
  if (max_denominator < largest)
    throw ValidationError("max_denominator " + std::to_string(max_denominator) +
                          " < largest cohort size " + std::to_string(largest));
  if (max_doses < 1) throw ValidationError("max_doses must be >= 1");
  if (regret_rules.esc_rate_den < 1 || regret_rules.des_rate_den < 1 ||
      regret_rules.rec_rate_den < 1)
    throw ValidationError("regret rate denominators must be >= 1");
}

bool ProtocolConfig::allows_cohort_size(int size) const {
  return std::find(cohort_sizes.begin(), cohort_sizes.end(), size) != cohort_sizes.end();
}

namespace {

std::string show(int t, int n) { return std::to_string(t) + "/" + std::to_string(n); }

}  // namespace

Tally validate_tally(int t, int n, const ProtocolConfig& config) {
  if (n < 0) throw ValidationError("tally " + show(t, n) + ": n < 0");
  if (n > config.max_denominator)
    throw ValidationError("tally " + show(t, n) + ": n > max_denominator " +
                          std::to_string(config.max_denominator));
  if (t < 0) throw ValidationError("tally " + show(t, n) + ": t < 0");
  if (t > n) throw ValidationError("tally " + show(t, n) + ": t > n");
  return Tally{t, n};
}

bool is_valid_tally(const Tally& q, const ProtocolConfig& config) {
  return 0 <= q.t && q.t <= q.n && q.n <= config.max_denominator;
}

void validate_state(const EscalationState& state, const ProtocolConfig& config) {
  const auto count = state.dose_count();
  if (count < 1) throw ValidationError("state has no doses");
  if (count > static_cast<std::size_t>(config.max_doses))
    throw ValidationError("state has " + std::to_string(count) + " doses, max_doses is " +
                          std::to_string(config.max_doses));
  for (const auto* side : {&state.lower, &state.higher})
    for (const Tally& q : *side) validate_tally(q.t, q.n, config);
}

bool is_valid_state(const EscalationState& state, const ProtocolConfig& config) {
  try {
    validate_state(state, config);
    return true;
  } catch (const ValidationError&) {
    return false;
  }
}

EscalationState make_state(std::vector<Tally> tallies, int current_index,
                           const ProtocolConfig& config) {
  if (tallies.empty()) throw ValidationError("empty tally list");
  if (current_index < 1 || current_index > static_cast<int>(tallies.size()))
    throw ValidationError("current index " + std::to_string(current_index) +
                          " outside 1.." + std::to_string(tallies.size()));
  EscalationState s;
  s.lower.assign(tallies.rbegin() + (tallies.size() - current_index), tallies.rend());
  s.higher.assign(tallies.begin() + current_index, tallies.end());
  validate_state(s, config);
  return s;
}

std::vector<Tally> state_tallies(const EscalationState& state, const ProtocolConfig& config) {
  validate_state(state, config);
  std::vector<Tally> out(state.lower.rbegin(), state.lower.rend());
  out.insert(out.end(), state.higher.begin(), state.higher.end());
  return out;
}

EscalationState initial_state(int doses, const ProtocolConfig& config) {
  if (doses < 1 || doses > config.max_doses)
    throw ValidationError("doses " + std::to_string(doses) + " outside 1.." +
                          std::to_string(config.max_doses));
  return make_state(std::vector<Tally>(doses), 1, config);
}

bool is_well_formed(const TrialPath& path) {
  const auto& ev = path.events;
  if (ev.size() < 2 || ev.size() % 2 != 0) return false;
  for (std::size_t i = 0; i + 2 < ev.size(); i += 2) {
    const auto* d = std::get_if<Decision>(&ev[i]);
    if (!d || *d == Decision::stop) return false;
    if (!std::holds_alternative<EscalationState>(ev[i + 1])) return false;
  }
  const auto* last_decision = std::get_if<Decision>(&ev[ev.size() - 2]);
  return last_decision && *last_decision == Decision::stop &&
         std::holds_alternative<Recommendation>(ev.back());
}

}  // namespace rcdose
