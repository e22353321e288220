#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rcdose {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;         // runtime error
inline constexpr int usage = 2;           // bad arguments
inline constexpr int counterexample = 3;  // verify found a violation
}  // namespace exit_code

/// Runs one command line. `args` excludes the program name.
///   next   --state S [--cohorts 3,2,1]
///   paths  --doses D [--cohorts ...] [--count-only]
///   recs   --state S [--via S] [--cohorts ...]
///   verify --property safety|liveness|dlt-cap|mtd-support|determinism --doses A..B
///   serve  --port P [--data DIR] [--host H]
/// Global: --json, --config FILE (a JSON protocol configuration).
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rcdose
