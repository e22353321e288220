#include "rcdose/http_service.hpp"

#include <httplib.h>

#include <algorithm>

#include "rcdose/canonical_text.hpp"
#include "rcdose/json_codec.hpp"
#include "rcdose/path_explorer.hpp"
#include "rcdose/property_verifier.hpp"
#include "rcdose/protocol_engine.hpp"

namespace rcdose {
namespace {

// Carries an HTTP status out of a handler.
struct HttpError {
  int status;
  std::string message;
};

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(SessionError::Kind kind) {
  switch (kind) {
    case SessionError::Kind::concluded: return 409;
    case SessionError::Kind::nothing_to_undo: return 409;
    case SessionError::Kind::disallowed_size:
    case SessionError::Kind::bad_dlts:
    case SessionError::Kind::overflow: return 422;
    case SessionError::Kind::malformed:
    case SessionError::Kind::integrity: return 500;
  }
  return 500;
}

template <class Handler>
httplib::Server::Handler guarded(Handler h) {
  return [h](const httplib::Request& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (const HttpError& e) {
      reply(res, e.status, {{"error", e.message}});
    } catch (const SessionError& e) {
      reply(res, status_for(e.kind()), {{"error", e.what()}});
    } catch (const Json::exception& e) {
      reply(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    } catch (const ParseError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const ValidationError& e) {
      reply(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      reply(res, 500, {{"error", e.what()}});
    }
  };
}

Json body_of(const httplib::Request& req) {
  if (req.body.empty()) return Json::object();
  Json j = Json::parse(req.body);
  if (!j.is_object()) throw HttpError{400, "request body must be a JSON object"};
  return j;
}

int int_field(const Json& j, const char* name) {
  if (!j.contains(name) || !j.at(name).is_number_integer())
    throw HttpError{400, std::string("missing integer field '") + name + "'"};
  return j.at(name).get<int>();
}

int int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) throw HttpError{400, std::string("missing parameter '") + name + "'"};
  try {
    return std::stoi(req.get_param_value(name));
  } catch (const std::exception&) {
    throw HttpError{400, std::string("parameter '") + name + "' is not an integer"};
  }
}

Json whatif_json(const TrialSession& t) {
  const Decision d = next_decision(t.state, t.config);
  Json rows = Json::array();
  for (const Transition& tr : successors(t.state, d, t.config)) {
    const Decision then = next_decision(tr.state, t.config);
    Json row{{"size", tr.size},
             {"dlts", tr.dlts},
             {"state", tr.state},
             {"next_decision", then},
             {"status", then == Decision::stop ? "concluded" : "active"},
             {"reachable_recommendations",
              reachable_recommendations(tr.state, std::nullopt, t.config)}};
    row["recommendation"] = then == Decision::stop
                                ? Json(stop_recommendation(tr.state, t.config.regret_rules))
                                : Json(nullptr);
    rows.push_back(std::move(row));
  }
  return Json{{"id", t.id}, {"state", t.state}, {"decision", d}, {"outcomes", std::move(rows)}};
}

}  // namespace

Service::Service(SessionStore& store, ServiceOptions options)
    : store_(store), options_(std::move(options)) {}

void Service::install(httplib::Server& server) {
  auto config_for = [this](const Json& body) {
    ProtocolConfig c = options_.defaults;
    if (body.contains("config")) c = body.at("config").get<ProtocolConfig>();
    if (body.contains("cohort_sizes"))
      c.cohort_sizes = body.at("cohort_sizes").get<std::vector<int>>();
    c.validate();
    return c;
  };

  auto query_config = [this](const httplib::Request& req) {
    ProtocolConfig c = options_.defaults;
    if (req.has_param("cohorts")) c.cohort_sizes = parse_int_list(req.get_param_value("cohorts"));
    c.validate();
    return c;
  };

  auto find = [this](const std::string& id) {
    auto s = store_.get(id);
    if (!s) throw HttpError{404, "unknown trial " + id};
    return s;
  };

  server.Post("/trials", guarded([this, config_for](const httplib::Request& req,
                                                    httplib::Response& res) {
    const Json body = body_of(req);
    const int doses = int_field(body, "doses");
    auto s = store_.create(config_for(body), doses);
    reply(res, 201, session_json(*s));
  }));

  server.Get(R"(/trials/([0-9a-f]+))", guarded([find](const httplib::Request& req,
                                                      httplib::Response& res) {
    reply(res, 200, session_json(*find(req.matches[1])));
  }));

  server.Post(R"(/trials/([0-9a-f]+)/outcomes)",
              guarded([this, find](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                find(id);
                const Json body = body_of(req);
                auto s = store_.record(id, int_field(body, "size"), int_field(body, "dlts"));
                reply(res, 200, session_json(*s));
              }));

  server.Post(R"(/trials/([0-9a-f]+)/undo)",
              guarded([this, find](const httplib::Request& req, httplib::Response& res) {
                const std::string id = req.matches[1];
                find(id);
                reply(res, 200, session_json(*store_.undo(id)));
              }));

  server.Get(R"(/trials/([0-9a-f]+)/whatif)",
             guarded([find](const httplib::Request& req, httplib::Response& res) {
               auto s = find(req.matches[1]);
               if (s->concluded()) throw HttpError{409, "trial concluded"};
               reply(res, 200, whatif_json(*s));
             }));

  server.Get("/protocol/paths", guarded([this, query_config](const httplib::Request& req,
                                                             httplib::Response& res) {
    const ProtocolConfig config = query_config(req);
    const int doses = int_param(req, "doses");
    if (doses > options_.max_doses)
      throw HttpError{422, "doses " + std::to_string(doses) + " exceeds the server limit of " +
                               std::to_string(options_.max_doses) + "; use the CLI"};
    const auto initial = initial_state(doses, config);
    const std::uint64_t count = ReachableGraph(initial, config).paths_from(initial);
    Json out{{"doses", doses}, {"cohort_sizes", config.cohort_sizes}, {"count", count}};
    const bool count_only = req.has_param("count_only") && req.get_param_value("count_only") != "0";
    if (!count_only) {
      if (count > options_.max_paths)
        throw HttpError{422, std::to_string(count) + " paths exceed the server limit of " +
                                 std::to_string(options_.max_paths) + "; use count_only or the CLI"};
      Json lines = Json::array();
      for (const TrialPath& p : enumerate_paths(initial, config)) lines.push_back(print_path(p));
      out["paths"] = std::move(lines);
    }
    reply(res, 200, out);
  }));

  server.Get("/protocol/verify", guarded([this, query_config](const httplib::Request& req,
                                                              httplib::Response& res) {
    const ProtocolConfig config = query_config(req);
    if (!req.has_param("property")) throw HttpError{400, "missing parameter 'property'"};
    const Property p = property_from_name(req.get_param_value("property"));
    const DoseRange range =
        parse_dose_range(req.has_param("doses") ? req.get_param_value("doses") : "1..4");
    if (range.last > options_.max_doses)
      throw HttpError{422, "doses beyond the server limit of " +
                               std::to_string(options_.max_doses) + "; use the CLI"};
    std::uint64_t total = 0;
    for (int d = std::max(range.first, 1); d <= range.last; ++d) {
      const auto initial = initial_state(d, config);
      total += ReachableGraph(initial, config).paths_from(initial);
    }
    if (total > options_.max_verify_paths)
      throw HttpError{422, std::to_string(total) + " paths exceed the server limit of " +
                               std::to_string(options_.max_verify_paths) + "; use the CLI"};
    reply(res, 200, check_property(p, range, config));
  }));
}

}  // namespace rcdose
