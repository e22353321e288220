#include "rcdose/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>

#include "rcdose/canonical_text.hpp"
#include "rcdose/http_service.hpp"
#include "rcdose/json_codec.hpp"
#include "rcdose/path_explorer.hpp"
#include "rcdose/property_verifier.hpp"
#include "rcdose/protocol_engine.hpp"

namespace rcdose {
namespace {

struct Options {
  bool json = false;
  std::string config_file;
  std::string cohorts;
  std::string state;
  std::string via;
  int doses = 0;
  bool count_only = false;
  std::string property;
  std::string dose_range = "1..4";
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string data_dir;
};

ProtocolConfig load_config(const Options& o) {
  ProtocolConfig c;
  if (!o.config_file.empty()) {
    std::ifstream in(o.config_file);
    if (!in) throw ValidationError("cannot read config file " + o.config_file);
    c = Json::parse(in).get<ProtocolConfig>();
  }
  if (!o.cohorts.empty()) c.cohort_sizes = parse_int_list(o.cohorts);
  c.validate();
  return c;
}

std::string show_set(const std::set<int>& xs) {
  std::string s = "[";
  for (int x : xs) s += (s.size() > 1 ? "," : "") + std::to_string(x);
  return s + "]";
}

void print_report(std::ostream& out, const PropertyReport& r) {
  out << "property: " << r.property_name << '\n';
  out << "doses:";
  for (int d : r.doses_checked) out << ' ' << d;
  out << '\n';
  out << "paths examined: " << r.paths_examined << '\n';
  if (r.states_examined) out << "states examined: " << r.states_examined << '\n';
  out << "counterexamples: " << r.counterexamples.size() << '\n';
  for (const Counterexample& c : r.counterexamples)
    out << "  D=" << c.doses << ' ' << print_path(c.path) << "  # " << c.detail << '\n';
  out << "result: " << (r.holds() ? "holds" : "VIOLATED") << '\n';
}

int run_next(const Options& o, std::ostream& out) {
  const ProtocolConfig c = load_config(o);
  const EscalationState s = parse_state(o.state, c);
  const Decision d = next_decision(s, c);
  if (o.json) {
    Json j{{"state", s}, {"next_decision", d}};
    if (d == Decision::stop) j["recommendation"] = stop_recommendation(s, c.regret_rules);
    out << j.dump() << '\n';
  } else {
    out << decision_name(d) << '\n';
  }
  return exit_code::ok;
}

int run_paths(const Options& o, std::ostream& out) {
  const ProtocolConfig c = load_config(o);
  if (o.count_only) {
    const auto n = count_paths(o.doses, c);
    if (o.json)
      out << Json{{"doses", o.doses}, {"count", n}}.dump() << '\n';
    else
      out << n << '\n';
    return exit_code::ok;
  }
  const auto paths = enumerate_paths(initial_state(o.doses, c), c);
  if (o.json) {
    Json lines = Json::array();
    for (const TrialPath& p : paths) lines.push_back(print_path(p));
    out << Json{{"doses", o.doses}, {"count", paths.size()}, {"paths", lines}}.dump() << '\n';
  } else {
    for (const TrialPath& p : paths) out << print_path(p) << '\n';
  }
  return exit_code::ok;
}

int run_recs(const Options& o, std::ostream& out) {
  const ProtocolConfig c = load_config(o);
  const EscalationState s = parse_state(o.state, c);
  std::optional<StateTemplate> via;
  if (!o.via.empty()) via = StateTemplate::exact(parse_state(o.via, c));
  const auto recs = reachable_recommendations(s, via, c);
  if (o.json)
    out << Json{{"state", s}, {"reachable_recommendations", recs}}.dump() << '\n';
  else
    out << show_set(recs) << '\n';
  return exit_code::ok;
}

int run_verify(const Options& o, std::ostream& out) {
  const ProtocolConfig c = load_config(o);
  const PropertyReport r =
      check_property(property_from_name(o.property), parse_dose_range(o.dose_range), c);
  if (o.json)
    out << Json(r).dump() << '\n';
  else
    print_report(out, r);
  return r.holds() ? exit_code::ok : exit_code::counterexample;
}

int run_serve(const Options& o, std::ostream& out) {
  std::string dir = o.data_dir;
  if (dir.empty())
    if (const char* env = std::getenv("RCDOSE_DATA_DIR")) dir = env;
  ServiceOptions so;
  so.defaults = load_config(o);
  SessionStore store(dir.empty() ? std::nullopt
                                 : std::optional<std::filesystem::path>(dir));
  const std::size_t loaded = store.load_all();
  Service service(store, so);
  httplib::Server server;
  service.install(server);
  out << "serving on http://" << o.host << ':' << o.port << " (" << loaded
      << " trials loaded" << (dir.empty() ? ", memory only" : ", data in " + dir) << ")"
      << std::endl;
  if (!server.listen(o.host, o.port)) throw std::runtime_error("cannot listen on port " +
                                                               std::to_string(o.port));
  return exit_code::ok;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Regret-constrained 3+3 dose-escalation engine", "rcdose"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "Machine-readable output");
  app.add_option("--config", o.config_file, "Protocol configuration (JSON)");

  auto* next = app.add_subcommand("next", "Print the mandated next decision for a state");
  next->add_option("--state", o.state, "State, e.g. [0/3,0/3,0/3]-[]")->required();
  next->add_option("--cohorts", o.cohorts, "Allowed cohort sizes, e.g. 3,2,1");

  auto* paths = app.add_subcommand("paths", "Enumerate every admissible trial path");
  paths->add_option("--doses", o.doses, "Number of doses")->required();
  paths->add_option("--cohorts", o.cohorts, "Allowed cohort sizes");
  paths->add_flag("--count-only", o.count_only, "Print only the number of paths");

  auto* recs = app.add_subcommand("recs", "Print the recommendations still reachable");
  recs->add_option("--state", o.state, "Current state")->required();
  recs->add_option("--via", o.via, "Only paths through this state");
  recs->add_option("--cohorts", o.cohorts, "Allowed cohort sizes");

  auto* verify = app.add_subcommand("verify", "Check a protocol property exhaustively");
  verify->add_option("--property", o.property, "safety|liveness|dlt-cap|mtd-support|determinism")
      ->required();
  verify->add_option("--doses", o.dose_range, "Dose counts, e.g. 1..4");
  verify->add_option("--cohorts", o.cohorts, "Allowed cohort sizes");

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--port", o.port, "TCP port");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--data", o.data_dir, "Journal directory (default $RCDOSE_DATA_DIR)");
  serve->add_option("--cohorts", o.cohorts, "Default cohort sizes for new trials");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? exit_code::ok : exit_code::usage;
  }

  try {
    if (*next) return run_next(o, out);
    if (*paths) return run_paths(o, out);
    if (*recs) return run_recs(o, out);
    if (*verify) return run_verify(o, out);
    if (*serve) return run_serve(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::failure;
  }
  return exit_code::usage;
}

}  // namespace rcdose
