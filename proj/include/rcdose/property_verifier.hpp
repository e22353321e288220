#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcdose/core_model.hpp"

namespace rcdose {

enum class Property { safety, liveness, dlt_cap, mtd_support, determinism };

const char* property_name(Property p);
/// Accepts safety, liveness, dlt-cap, mtd-support, determinism.
Property property_from_name(const std::string& name);

struct DoseRange {
  int first = 1;
  int last = 1;
};

/// Parses "A..B" or a single "A".
DoseRange parse_dose_range(const std::string& text);

struct Counterexample {
  int doses = 0;
  TrialPath path;
  std::string detail;
};

/// A property holds iff `counterexamples` is empty.
struct PropertyReport {
  std::string property_name;
  std::vector<int> doses_checked;
  std::vector<Counterexample> counterexamples;
  std::uint64_t paths_examined = 0;
  std::uint64_t states_examined = 0;  // determinism only
  std::chrono::nanoseconds elapsed{0};

  bool holds() const { return counterexamples.empty(); }
};

// Per-path witnesses. Each returns a description of the violation, or nothing.
// `initial` stands in for the final state of a path with no state events.

/// A state whose current dose tallied more than one DLT, followed by a
/// recommendation at or above that dose.
std::optional<std::string> safety_violation(const TrialPath& path);
/// Anything after the recommendation, or no recommendation at the end.
std::optional<std::string> liveness_violation(const TrialPath& path);
/// Some dose tallying `config.regret_rules.dlt_cap` (default 5) or more DLTs.
std::optional<std::string> dlt_cap_violation(const TrialPath& path,
                                             const ProtocolConfig& config = {});
/// A recommended dose r >= 1 lacking max_denominator patients with an
/// acceptable rate in the final state.
std::optional<std::string> mtd_support_violation(const EscalationState& initial,
                                                 const TrialPath& path,
                                                 const ProtocolConfig& config = {});
/// The decision cascade is undefined or ambiguous at `state`: the explicit
/// infeasibility clauses and the existence of a successor disagree.
std::optional<std::string> determinism_violation(const EscalationState& state,
                                                 const ProtocolConfig& config = {});

/// Checks one property over a fixed collection of paths.
PropertyReport check_paths(Property property, const EscalationState& initial,
                           const std::vector<TrialPath>& paths, const ProtocolConfig& config = {});

/// Exhaustive check over all paths from `initial`.
PropertyReport check_from(Property property, const EscalationState& initial,
                          const ProtocolConfig& config = {});

/// Exhaustive check from the all-zero start for every dose count in `range`.
PropertyReport check_property(Property property, DoseRange range,
                              const ProtocolConfig& config = {});

PropertyReport check_safety(DoseRange range, const ProtocolConfig& config = {});
PropertyReport check_liveness(DoseRange range, const ProtocolConfig& config = {});
PropertyReport check_dlt_cap(DoseRange range, const ProtocolConfig& config = {});
PropertyReport check_mtd_support(DoseRange range, const ProtocolConfig& config = {});
PropertyReport check_determinism(DoseRange range, const ProtocolConfig& config = {});

}  // namespace rcdose
