#include "rcdose/property_verifier.hpp"

#include <charconv>

#include "rcdose/canonical_text.hpp"
#include "rcdose/path_explorer.hpp"
#include "rcdose/protocol_engine.hpp"

namespace rcdose {

const char* property_name(Property p) {
  switch (p) {
    case Property::safety: return "safety";
    case Property::liveness: return "liveness";
    case Property::dlt_cap: return "dlt-cap";
    case Property::mtd_support: return "mtd-support";
    case Property::determinism: return "determinism";
  }
  return "?";
}

Property property_from_name(const std::string& name) {
  for (Property p : {Property::safety, Property::liveness, Property::dlt_cap,
                     Property::mtd_support, Property::determinism})
    if (name == property_name(p)) return p;
  throw ValidationError("unknown property '" + name + "'");
}

DoseRange parse_dose_range(const std::string& text) {
  auto number = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
      throw ValidationError("bad dose range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  std::string_view all(text);
  DoseRange r;
  if (dots == std::string::npos) {
    r.first = r.last = number(all);
  } else {
    r.first = number(all.substr(0, dots));
    r.last = number(all.substr(dots + 2));
  }
  if (r.first < 1 || r.last < r.first)
    throw ValidationError("bad dose range '" + text + "'");
  return r;
}

namespace {

const EscalationState* final_state(const std::vector<PathEvent>& ev) {
  for (auto it = ev.rbegin(); it != ev.rend(); ++it)
    if (const auto* s = std::get_if<EscalationState>(&*it)) return s;
  return nullptr;
}

}  // namespace

std::optional<std::string> safety_violation(const TrialPath& path) {
  const auto& ev = path.events;
  if (ev.empty()) return std::nullopt;
  const auto* rec = std::get_if<Recommendation>(&ev.back());
  if (!rec) return std::nullopt;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i) {
    const auto* s = std::get_if<EscalationState>(&ev[i]);
    if (!s || s->lower.empty()) continue;
    const int x = s->current_dose();
    if (s->current().t > 1 && rec->dose >= x)
      return "dose " + std::to_string(x) + " tallied " + print_tally(s->current()) +
             " in " + print_state(*s) + " yet recommend_dose(" + std::to_string(rec->dose) +
             ")";
  }
  return std::nullopt;
}

std::optional<std::string> liveness_violation(const TrialPath& path) {
  const auto& ev = path.events;
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (std::holds_alternative<Recommendation>(ev[i]) && i + 1 < ev.size())
      return "event '" + print_event(ev[i + 1]) + "' follows " + print_event(ev[i]);
  if (ev.empty() || !std::holds_alternative<Recommendation>(ev.back()))
    return std::string("path does not end with a recommendation");
  return std::nullopt;
}

std::optional<std::string> dlt_cap_violation(const TrialPath& path,
                                             const ProtocolConfig& config) {
  const int cap = config.regret_rules.dlt_cap;
  for (const PathEvent& e : path.events) {
    const auto* s = std::get_if<EscalationState>(&e);
    if (!s) continue;
    for (const auto* side : {&s->lower, &s->higher})
      for (const Tally& q : *side)
        if (q.t >= cap)
          return "tally " + print_tally(q) + " in " + print_state(*s) + " reaches " +
                 std::to_string(cap) + " DLTs";
  }
  return std::nullopt;
}

std::optional<std::string> mtd_support_violation(const EscalationState& initial,
                                                 const TrialPath& path,
                                                 const ProtocolConfig& config) {
  const auto& ev = path.events;
  if (ev.empty()) return std::nullopt;
  const auto* rec = std::get_if<Recommendation>(&ev.back());
  if (!rec || rec->dose < 1) return std::nullopt;
  const EscalationState* fin = final_state(ev);
  if (!fin) fin = &initial;
  std::vector<Tally> flat(fin->lower.rbegin(), fin->lower.rend());
  flat.insert(flat.end(), fin->higher.begin(), fin->higher.end());
  if (rec->dose > static_cast<int>(flat.size()))
    return "recommend_dose(" + std::to_string(rec->dose) + ") beyond the dose ladder";
  const Tally& q = flat[rec->dose - 1];
  const int den = config.regret_rules.rec_rate_den;
  if (q.n < config.max_denominator || q.t * den > q.n)
    return "recommend_dose(" + std::to_string(rec->dose) + ") with tally " + print_tally(q) +
           " in " + print_state(*fin);
  return std::nullopt;
}

std::optional<std::string> determinism_violation(const EscalationState& state,
                                                 const ProtocolConfig& config) {
  for (Decision d : kContinuingDecisions) {
    const bool by_rule = infeasible_by_rule(state, d, config);
    const bool no_successor = successors(state, d, config).empty();
    if (by_rule != no_successor)
      return std::string(decision_name(d)) + " at " + print_state(state) +
             (no_successor ? " has no successor but no infeasibility clause applies"
                           : " is ruled infeasible yet has successors");
  }
  const Decision a = next_decision(state, config);
  const Decision b = next_decision(state, config);
  if (a != b) return "next decision is not stable at " + print_state(state);
  return std::nullopt;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Partial {
  std::uint64_t paths = 0;
  std::vector<Counterexample> found;
};

std::optional<std::string> path_violation(Property property, const EscalationState& initial,
                                          const TrialPath& path, const ProtocolConfig& config) {
  switch (property) {
    case Property::safety: return safety_violation(path);
    case Property::liveness: return liveness_violation(path);
    case Property::dlt_cap: return dlt_cap_violation(path, config);
    case Property::mtd_support: return mtd_support_violation(initial, path, config);
    case Property::determinism: break;
  }
  return std::nullopt;
}

void check_one_start(Property property, int doses, const EscalationState& initial,
                     const ProtocolConfig& config, PropertyReport& report) {
  if (property == Property::determinism) {
    ReachableGraph graph(initial, config);
    for (const auto& [s, node] : graph.nodes()) {
      ++report.states_examined;
      if (auto why = determinism_violation(s, config))
        report.counterexamples.push_back({doses, TrialPath{{s}}, *why});
    }
    report.paths_examined += reduce_paths(
        initial, config, std::uint64_t{0},
        [](std::uint64_t& n, std::span<const PathEvent>) { ++n; },
        [](std::uint64_t& into, std::uint64_t from) { into += from; });
    return;
  }
  Partial all = reduce_paths(
      initial, config, Partial{},
      [&](Partial& acc, std::span<const PathEvent> ev) {
        ++acc.paths;
        TrialPath path{{ev.begin(), ev.end()}};
        if (auto why = path_violation(property, initial, path, config))
          acc.found.push_back({doses, std::move(path), *why});
      },
      [](Partial& into, Partial& from) {
        into.paths += from.paths;
        std::move(from.found.begin(), from.found.end(), std::back_inserter(into.found));
      });
  report.paths_examined += all.paths;
  std::move(all.found.begin(), all.found.end(), std::back_inserter(report.counterexamples));
}

}  // namespace

PropertyReport check_paths(Property property, const EscalationState& initial,
                           const std::vector<TrialPath>& paths, const ProtocolConfig& config) {
  const auto start = Clock::now();
  PropertyReport report;
  report.property_name = property_name(property);
  const int doses = static_cast<int>(initial.dose_count());
  report.doses_checked = {doses};
  for (const TrialPath& p : paths) {
    ++report.paths_examined;
    std::optional<std::string> why;
    if (property == Property::determinism) {
      for (const PathEvent& e : p.events)
        if (const auto* s = std::get_if<EscalationState>(&e); s && !why)
          why = determinism_violation(*s, config);
    } else {
      why = path_violation(property, initial, p, config);
    }
    if (why) report.counterexamples.push_back({doses, p, *why});
  }
  report.elapsed = Clock::now() - start;
  return report;
}

PropertyReport check_from(Property property, const EscalationState& initial,
                          const ProtocolConfig& config) {
  const auto start = Clock::now();
  PropertyReport report;
  report.property_name = property_name(property);
  const int doses = static_cast<int>(initial.dose_count());
  report.doses_checked = {doses};
  check_one_start(property, doses, initial, config, report);
  report.elapsed = Clock::now() - start;
  return report;
}

PropertyReport check_property(Property property, DoseRange range, const ProtocolConfig& config) {
  config.validate();
  if (range.first < 1 || range.last > config.max_doses || range.first > range.last)
    throw ValidationError("dose range " + std::to_string(range.first) + ".." +
                          std::to_string(range.last) + " outside 1.." +
                          std::to_string(config.max_doses));
  const auto start = Clock::now();
  PropertyReport report;
  report.property_name = property_name(property);
  for (int d = range.first; d <= range.last; ++d) {
    report.doses_checked.push_back(d);
    check_one_start(property, d, initial_state(d, config), config, report);
  }
  report.elapsed = Clock::now() - start;
  return report;
}

PropertyReport check_safety(DoseRange r, const ProtocolConfig& c) {
  return check_property(Property::safety, r, c);
}
PropertyReport check_liveness(DoseRange r, const ProtocolConfig& c) {
  return check_property(Property::liveness, r, c);
}
PropertyReport check_dlt_cap(DoseRange r, const ProtocolConfig& c) {
  return check_property(Property::dlt_cap, r, c);
}
PropertyReport check_mtd_support(DoseRange r, const ProtocolConfig& c) {
  return check_property(Property::mtd_support, r, c);
}
PropertyReport check_determinism(DoseRange r, const ProtocolConfig& c) {
  return check_property(Property::determinism, r, c);
}

}  // namespace rcdose
