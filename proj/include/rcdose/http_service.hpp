#pragma once

#include <cstdint>

#include "rcdose/session_store.hpp"

namespace httplib {
class Server;
}

namespace rcdose {

struct ServiceOptions {
  // Enumeration and verification over HTTP stay within these bounds; larger
  // runs belong on the command line.
  int max_doses = 4;
  std::uint64_t max_paths = 100000;         // listed by /protocol/paths
  std::uint64_t max_verify_paths = 1000000;  // examined by /protocol/verify
  ProtocolConfig defaults{};
};

/// JSON API over a SessionStore.
///   POST /trials                  {doses, cohort_sizes?, config?}
///   GET  /trials/{id}
///   POST /trials/{id}/outcomes    {size, dlts}
///   POST /trials/{id}/undo
///   GET  /trials/{id}/whatif
///   GET  /protocol/paths?doses=D&cohorts=3,2,1&count_only=1
///   GET  /protocol/verify?property=P&doses=A..B&cohorts=...
/// Errors are {"error": "..."} with 400 malformed, 404 unknown trial,
/// 409 concluded trial, 422 disallowed outcome or server limit.
class Service {
 public:
  explicit Service(SessionStore& store, ServiceOptions options = {});
  void install(httplib::Server& server);

 private:
  SessionStore& store_;
  ServiceOptions options_;
};

}  // namespace rcdose
