#include "rcdose/path_explorer.hpp"

#include <algorithm>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rcdose/canonical_text.hpp"

namespace rcdose {

std::size_t path_event_bound(const EscalationState& initial, const ProtocolConfig& config) {
  return 2 * initial.dose_count() * static_cast<std::size_t>(config.max_denominator) + 2;
}

namespace {

const EscalationState& last_state(const EscalationState& initial,
                                  const std::vector<PathEvent>& prefix) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    if (const auto* s = std::get_if<EscalationState>(&*it)) return *s;
  return initial;
}

bool closed(const std::vector<PathEvent>& events) {
  return !events.empty() && std::holds_alternative<Recommendation>(events.back());
}

}  // namespace

void walk_paths(std::vector<PathEvent> prefix, const EscalationState& state,
                const ProtocolConfig& config,
                const std::function<void(std::span<const PathEvent>)>& visit) {
  std::vector<PathEvent> events = std::move(prefix);
  if (closed(events)) {
    visit(events);
    return;
  }
  const std::size_t bound = path_event_bound(state, config) + events.size();

  struct Frame {
    Decision decision;
    std::vector<Transition> children;
    std::size_t next = 0;
    bool appended = false;  // owns the last two entries of `events`
  };
  std::vector<Frame> stack;

  // `s` may live inside `events`; read it before growing the vector.
  auto stop_here = [&](const EscalationState& s) {
    const Recommendation rec{stop_recommendation(s, config.regret_rules)};
    events.emplace_back(Decision::stop);
    events.emplace_back(rec);
    visit(events);
    events.resize(events.size() - 2);
  };

  const Decision first = next_decision(state, config);
  if (first == Decision::stop) {
    stop_here(state);
    return;
  }
  stack.push_back({first, successors(state, first, config)});

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.next == top.children.size()) {
      const bool appended = top.appended;
      stack.pop_back();
      if (appended) events.resize(events.size() - 2);
      continue;
    }
    const Decision d = top.decision;
    Transition& t = top.children[top.next++];
    if (events.size() + 2 > bound)
      throw ProtocolError("path exceeds " + std::to_string(bound) + " events");
    events.emplace_back(d);
    events.emplace_back(t.state);
    const EscalationState& s = std::get<EscalationState>(events.back());
    const Decision nd = next_decision(s, config);
    if (nd == Decision::stop) {
      stop_here(s);
      events.resize(events.size() - 2);
    } else {
      auto children = successors(s, nd, config);
      stack.push_back({nd, std::move(children), 0, true});
    }
  }
}

std::size_t default_split_target() {
#ifdef _OPENMP
  return static_cast<std::size_t>(omp_get_max_threads()) * 16;
#else
  return 1;
#endif
}

std::vector<Subtree> split_paths(const EscalationState& initial, const ProtocolConfig& config,
                                 std::size_t target) {
  std::vector<Subtree> frontier{{{}, initial}};
  for (bool grew = true; grew && frontier.size() < target;) {
    grew = false;
    std::vector<Subtree> next;
    for (Subtree& part : frontier) {
      const Decision d = next_decision(part.state, config);
      if (d == Decision::stop) {
        next.push_back(std::move(part));
        continue;
      }
      for (Transition& t : successors(part.state, d, config)) {
        Subtree child{part.prefix, t.state};
        child.prefix.emplace_back(d);
        child.prefix.emplace_back(std::move(t.state));
        next.push_back(std::move(child));
      }
      grew = true;
    }
    frontier = std::move(next);
  }
  return frontier;
}

void sort_canonical(std::vector<TrialPath>& paths) {
  std::vector<std::pair<std::string, TrialPath>> keyed;
  keyed.reserve(paths.size());
  for (TrialPath& p : paths) keyed.emplace_back(print_path(p), std::move(p));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  paths.clear();
  for (auto& [key, p] : keyed) paths.push_back(std::move(p));
}

std::vector<TrialPath> enumerate_paths(const EscalationState& initial,
                                       const ProtocolConfig& config) {
  auto paths = reduce_paths(
      initial, config, std::vector<TrialPath>{},
      [](std::vector<TrialPath>& acc, std::span<const PathEvent> ev) {
        acc.push_back(TrialPath{{ev.begin(), ev.end()}});
      },
      [](std::vector<TrialPath>& into, std::vector<TrialPath>& from) {
        std::move(from.begin(), from.end(), std::back_inserter(into));
      });
  sort_canonical(paths);
  return paths;
}

std::vector<TrialPath> enumerate_paths_serial(const EscalationState& initial,
                                              const ProtocolConfig& config) {
  validate_state(initial, config);
  std::vector<TrialPath> paths;
  walk_paths({}, initial, config, [&](std::span<const PathEvent> ev) {
    paths.push_back(TrialPath{{ev.begin(), ev.end()}});
  });
  sort_canonical(paths);
  return paths;
}

std::vector<TrialPath> complete_paths(const EscalationState& initial,
                                      const std::vector<PathEvent>& prefix,
                                      const ProtocolConfig& config) {
  validate_state(initial, config);
  std::vector<TrialPath> paths;
  walk_paths(prefix, last_state(initial, prefix), config, [&](std::span<const PathEvent> ev) {
    paths.push_back(TrialPath{{ev.begin(), ev.end()}});
  });
  sort_canonical(paths);
  return paths;
}

std::uint64_t count_paths(int doses, const ProtocolConfig& config) {
  return reduce_paths(
      initial_state(doses, config), config, std::uint64_t{0},
      [](std::uint64_t& n, std::span<const PathEvent>) { ++n; },
      [](std::uint64_t& into, std::uint64_t from) { into += from; });
}

std::uint64_t count_paths_serial(int doses, const ProtocolConfig& config) {
  std::uint64_t n = 0;
  walk_paths({}, initial_state(doses, config), config,
             [&](std::span<const PathEvent>) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------

StateTemplate StateTemplate::exact(const EscalationState& s) {
  StateTemplate t;
  t.lower = s.lower;
  t.higher = s.higher;
  return t;
}

bool StateTemplate::matches(const EscalationState& s) const {
  if (current && (s.lower.empty() || s.lower.front() != *current)) return false;
  if ((requires_higher || next_higher) && s.higher.empty()) return false;
  if (next_higher && s.higher.front() != *next_higher) return false;
  if (lower && s.lower != *lower) return false;
  if (higher && s.higher != *higher) return false;
  return true;
}

namespace {

using MatchCallback = std::function<void(std::span<const PathEvent>)>;

bool event_matches(const Matcher& m, const PathEvent& e) {
  return std::visit(
      [&](const auto& mm) -> bool {
        using M = std::decay_t<decltype(mm)>;
        if constexpr (std::is_same_v<M, match::DecisionIs>) {
          const auto* d = std::get_if<Decision>(&e);
          return d && *d == mm.decision;
        } else if constexpr (std::is_same_v<M, match::AnyDecision>) {
          return std::holds_alternative<Decision>(e);
        } else if constexpr (std::is_same_v<M, StateTemplate>) {
          const auto* s = std::get_if<EscalationState>(&e);
          return s && mm.matches(*s);
        } else if constexpr (std::is_same_v<M, match::RecommendationIs>) {
          const auto* r = std::get_if<Recommendation>(&e);
          return r && r->dose == mm.dose;
        } else if constexpr (std::is_same_v<M, match::AnyRecommendation>) {
          return std::holds_alternative<Recommendation>(e);
        } else {
          return false;
        }
      },
      m);
}

bool captures(const Matcher& m) {
  return std::holds_alternative<match::AnyDecision>(m) ||
         std::holds_alternative<match::AnyRecommendation>(m);
}

void align(std::span<const PathEvent> events, std::size_t i, const PathPattern& p,
           std::size_t j, std::vector<PathEvent>& bound, const MatchCallback& on_match) {
  if (j == p.matchers.size()) {
    if (i == events.size()) on_match(bound);
    return;
  }
  const Matcher& m = p.matchers[j];
  if (std::holds_alternative<match::Gap>(m)) {
    for (std::size_t k = i; k <= events.size(); ++k) align(events, k, p, j + 1, bound, on_match);
    return;
  }
  if (i == events.size() || !event_matches(m, events[i])) return;
  if (captures(m)) bound.push_back(events[i]);
  align(events, i + 1, p, j + 1, bound, on_match);
  if (captures(m)) bound.pop_back();
}

}  // namespace

void for_each_match(std::span<const PathEvent> events, const PathPattern& pattern,
                    const MatchCallback& on_match) {
  std::vector<PathEvent> bound;
  align(events, 0, pattern, 0, bound, on_match);
}

bool matches(std::span<const PathEvent> events, const PathPattern& pattern) {
  bool found = false;
  // Alignments are few for the small patterns used here; no early exit needed.
  for_each_match(events, pattern, [&](std::span<const PathEvent>) { found = true; });
  return found;
}

std::vector<TrialPath> match_paths(const EscalationState& initial, const PathPattern& pattern,
                                   const ProtocolConfig& config) {
  auto paths = reduce_paths(
      initial, config, std::vector<TrialPath>{},
      [&](std::vector<TrialPath>& acc, std::span<const PathEvent> ev) {
        if (matches(ev, pattern)) acc.push_back(TrialPath{{ev.begin(), ev.end()}});
      },
      [](std::vector<TrialPath>& into, std::vector<TrialPath>& from) {
        std::move(from.begin(), from.end(), std::back_inserter(into));
      });
  sort_canonical(paths);
  return paths;
}

std::set<Decision> captured_decisions(const EscalationState& initial, const PathPattern& pattern,
                                      const ProtocolConfig& config) {
  return reduce_paths(
      initial, config, std::set<Decision>{},
      [&](std::set<Decision>& acc, std::span<const PathEvent> ev) {
        for_each_match(ev, pattern, [&](std::span<const PathEvent> bound) {
          for (const PathEvent& e : bound)
            if (const auto* d = std::get_if<Decision>(&e)) acc.insert(*d);
        });
      },
      [](std::set<Decision>& into, std::set<Decision>& from) { into.merge(from); });
}

// ---------------------------------------------------------------------------

ReachableGraph::ReachableGraph(const EscalationState& initial, const ProtocolConfig& config)
    : root_(initial) {
  validate_state(initial, config);
  std::vector<EscalationState> work{initial};
  nodes_[initial];
  while (!work.empty()) {
    EscalationState s = std::move(work.back());
    work.pop_back();
    Node& node = nodes_[s];
    node.next = next_decision(s, config);
    if (node.next == Decision::stop) {
      recs_[s] = {stop_recommendation(s, config.regret_rules)};
      continue;
    }
    for (Transition& t : successors(s, node.next, config)) {
      node.children.push_back(t.state);
      auto [it, inserted] = nodes_.try_emplace(t.state);
      it->second.incoming.insert(node.next);
      if (inserted) work.push_back(std::move(t.state));
    }
  }
  // Children always carry strictly more patients, so ordering by total
  // enrollment descending visits every child before its parents.
  std::vector<const EscalationState*> order;
  for (const auto& [s, node] : nodes_) order.push_back(&s);
  auto enrolled = [](const EscalationState* s) {
    int n = 0;
    for (const auto* side : {&s->lower, &s->higher})
      for (const Tally& q : *side) n += q.n;
    return n;
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](auto* a, auto* b) { return enrolled(a) > enrolled(b); });
  for (const EscalationState* s : order) {
    const Node& node = nodes_.at(*s);
    if (node.next == Decision::stop) {
      path_counts_[*s] = 1;
      continue;
    }
    std::set<int>& acc = recs_[*s];
    std::uint64_t& n = path_counts_[*s];
    for (const EscalationState& c : node.children) {
      const auto& sub = recs_.at(c);
      acc.insert(sub.begin(), sub.end());
      n += path_counts_.at(c);
    }
  }
}

const std::set<int>& ReachableGraph::recommendations_from(const EscalationState& s) const {
  return recs_.at(s);
}

std::uint64_t ReachableGraph::paths_from(const EscalationState& s) const {
  return path_counts_.at(s);
}

std::set<Decision> decisions_at(const EscalationState& initial, const StateTemplate& where,
                                const ProtocolConfig& config) {
  ReachableGraph g(initial, config);
  std::set<Decision> out;
  for (const auto& [s, node] : g.nodes())
    if (where.matches(s)) out.insert(node.next);
  return out;
}

std::set<Decision> decisions_preceding(const EscalationState& initial,
                                       const StateTemplate& where,
                                       const ProtocolConfig& config) {
  ReachableGraph g(initial, config);
  std::set<Decision> out;
  for (const auto& [s, node] : g.nodes())
    if (where.matches(s)) out.insert(node.incoming.begin(), node.incoming.end());
  return out;
}

std::set<int> reachable_recommendations(const EscalationState& initial,
                                        const std::optional<StateTemplate>& via,
                                        const ProtocolConfig& config) {
  ReachableGraph g(initial, config);
  if (!via) return g.recommendations_from(initial);
  std::set<int> out;
  for (const auto& [s, node] : g.nodes())
    if (via->matches(s)) {
      const auto& r = g.recommendations_from(s);
      out.insert(r.begin(), r.end());
    }
  return out;
}

bool contains_path(const EscalationState& initial, const TrialPath& candidate,
                   const ProtocolConfig& config) {
  validate_state(initial, config);
  if (!is_well_formed(candidate)) return false;
  const auto& ev = candidate.events;
  EscalationState s = initial;
  for (std::size_t i = 0; i + 2 < ev.size(); i += 2) {
    const Decision d = std::get<Decision>(ev[i]);
    if (next_decision(s, config) != d) return false;
    const auto& claimed = std::get<EscalationState>(ev[i + 1]);
    bool found = false;
    for (const Transition& t : successors(s, d, config))
      if (t.state == claimed) {
        found = true;
        break;
      }
    if (!found) return false;
    s = claimed;
  }
  return next_decision(s, config) == Decision::stop &&
         std::get<Recommendation>(ev.back()).dose == stop_recommendation(s, config.regret_rules);
}

}  // namespace rcdose
