#pragma once

// Canonical term syntax shared with the published path listings:
//   tally  T/N
//   state  [T/N,...]-[T/N,...]        (lower list, then higher list)
//   path   [sta,[0/3]-[0/0],...,stop,recommend_dose(R)].
// No whitespace anywhere; a path line ends with "].".

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rcdose/core_model.hpp"

namespace rcdose {

/// Syntax error in canonical text. `position` is the 0-based byte offset.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at offset " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

std::string print_tally(const Tally& q);
std::string print_state(const EscalationState& s);
std::string print_event(const PathEvent& e);
std::string print_path(const TrialPath& path);

/// Parses a state. Syntax problems raise ParseError; a well-formed state that
/// breaks a domain bound raises ValidationError.
EscalationState parse_state(std::string_view text, const ProtocolConfig& config = {});
Tally parse_tally(std::string_view text, const ProtocolConfig& config = {});
TrialPath parse_path(std::string_view text, const ProtocolConfig& config = {});

/// "3,2,1" -> {3,2,1}
std::vector<int> parse_int_list(std::string_view text);

}  // namespace rcdose
