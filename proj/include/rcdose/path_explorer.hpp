#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "rcdose/core_model.hpp"
#include "rcdose/protocol_engine.hpp"

namespace rcdose {

// ---------------------------------------------------------------------------
// Enumeration
//
// Paths are generated depth-first from an explicit work list. Only cohort
// outcomes branch; each decision is the deterministic next_decision of the
// preceding state. Every continuing step enrolls at least one patient, so a
// path holds at most 2 * doses * max_denominator + 2 events.
// ---------------------------------------------------------------------------

std::size_t path_event_bound(const EscalationState& initial, const ProtocolConfig& config);

/// Visits every completion of `prefix` (a partial event sequence that left
/// the trial in `state`). The span passed to `visit` is only valid during the
/// call. Serial; this is the reference walker.
void walk_paths(std::vector<PathEvent> prefix, const EscalationState& state,
                const ProtocolConfig& config,
                const std::function<void(std::span<const PathEvent>)>& visit);

/// A disjoint piece of the path tree: every path below it starts with
/// `prefix` and continues from `state`.
struct Subtree {
  std::vector<PathEvent> prefix;
  EscalationState state;
};

/// Splits the path tree breadth-first until at least `target` subtrees exist
/// or nothing is left to split. Subtrees come out in enumeration order.
std::vector<Subtree> split_paths(const EscalationState& initial, const ProtocolConfig& config,
                                 std::size_t target);

std::size_t default_split_target();

/// Parallel map-reduce over all paths from `initial`. Each subtree folds into
/// its own copy of `identity` via `visit(acc, events)`; partial results are
/// merged in enumeration order with `merge(into, from)`, so the result does
/// not depend on the thread count.
template <class Acc, class Visit, class Merge>
Acc reduce_paths(const EscalationState& initial, const ProtocolConfig& config, Acc identity,
                 Visit visit, Merge merge) {
  validate_state(initial, config);
  const std::vector<Subtree> parts = split_paths(initial, config, default_split_target());
  std::vector<Acc> partial(parts.size(), identity);
  const auto count = static_cast<std::int64_t>(parts.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < count; ++i) {
    Acc& acc = partial[static_cast<std::size_t>(i)];
    walk_paths(parts[i].prefix, parts[i].state, config,
               [&](std::span<const PathEvent> events) { visit(acc, events); });
  }
  Acc result = std::move(identity);
  for (Acc& p : partial) merge(result, p);
  return result;
}

/// All paths in canonical (byte-sorted printed form) order. Parallel.
std::vector<TrialPath> enumerate_paths(const EscalationState& initial,
                                       const ProtocolConfig& config = {});
/// Single-threaded reference for enumerate_paths; same output.
std::vector<TrialPath> enumerate_paths_serial(const EscalationState& initial,
                                              const ProtocolConfig& config = {});

/// Completions of a partial path. A prefix already closed by a
/// recommendation completes only to itself.
std::vector<TrialPath> complete_paths(const EscalationState& initial,
                                      const std::vector<PathEvent>& prefix,
                                      const ProtocolConfig& config = {});

/// Number of paths from the all-zero state with `doses` doses. Parallel.
std::uint64_t count_paths(int doses, const ProtocolConfig& config = {});
std::uint64_t count_paths_serial(int doses, const ProtocolConfig& config = {});

void sort_canonical(std::vector<TrialPath>& paths);

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

/// Constrains any subset of a state's shape; unset fields are wildcards.
struct StateTemplate {
  std::optional<Tally> current;
  std::optional<Tally> next_higher;
  bool requires_higher = false;  // some dose above the current one exists
  std::optional<std::vector<Tally>> lower;
  std::optional<std::vector<Tally>> higher;

  static StateTemplate exact(const EscalationState& s);
  bool matches(const EscalationState& s) const;
};

namespace match {
struct Gap {};  // any, possibly empty, run of events
struct DecisionIs { Decision decision; };
struct AnyDecision {};  // captured
struct RecommendationIs { int dose; };
struct AnyRecommendation {};  // captured
}  // namespace match

using Matcher = std::variant<match::Gap, match::DecisionIs, match::AnyDecision, StateTemplate,
                             match::RecommendationIs, match::AnyRecommendation>;

struct PathPattern {
  std::vector<Matcher> matchers;
};

/// Calls `on_match` once per alignment of `pattern` against `events`, with the
/// events bound by capturing matchers, in pattern order.
void for_each_match(std::span<const PathEvent> events, const PathPattern& pattern,
                    const std::function<void(std::span<const PathEvent>)>& on_match);
bool matches(std::span<const PathEvent> events, const PathPattern& pattern);

std::vector<TrialPath> match_paths(const EscalationState& initial, const PathPattern& pattern,
                                   const ProtocolConfig& config = {});

/// Decisions bound by AnyDecision matchers across all matching paths.
std::set<Decision> captured_decisions(const EscalationState& initial, const PathPattern& pattern,
                                      const ProtocolConfig& config = {});

// ---------------------------------------------------------------------------
// State-level queries. These see the start state as the first event of every
// path, so it can be matched (and nothing precedes it).
// ---------------------------------------------------------------------------

std::set<Decision> decisions_at(const EscalationState& initial, const StateTemplate& where,
                                const ProtocolConfig& config = {});
std::set<Decision> decisions_preceding(const EscalationState& initial,
                                       const StateTemplate& where,
                                       const ProtocolConfig& config = {});
std::set<int> reachable_recommendations(const EscalationState& initial,
                                        const std::optional<StateTemplate>& via = std::nullopt,
                                        const ProtocolConfig& config = {});

/// Membership in enumerate_paths(initial), checked by replaying the candidate.
bool contains_path(const EscalationState& initial, const TrialPath& candidate,
                   const ProtocolConfig& config = {});

/// Reachable states with their mandated decision and incoming decisions.
/// Built once by a memoised search; answers the state-level queries without
/// walking every path.
class ReachableGraph {
 public:
  struct Node {
    Decision next = Decision::stop;
    std::set<Decision> incoming;
    std::vector<EscalationState> children;
  };

  ReachableGraph(const EscalationState& initial, const ProtocolConfig& config);

  const std::map<EscalationState, Node>& nodes() const { return nodes_; }
  const EscalationState& root() const { return root_; }
  /// Recommendations on every path continuing from a reachable state.
  const std::set<int>& recommendations_from(const EscalationState& s) const;
  /// Number of distinct complete paths starting at `s`.
  std::uint64_t paths_from(const EscalationState& s) const;

 private:
  EscalationState root_;
  std::map<EscalationState, Node> nodes_;
  std::map<EscalationState, std::set<int>> recs_;
  std::map<EscalationState, std::uint64_t> path_counts_;
};

}  // namespace rcdose
