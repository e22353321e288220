#include "rcdose/canonical_text.hpp"

#include <cctype>
#include <charconv>

namespace rcdose {

std::string print_tally(const Tally& q) {
  return std::to_string(q.t) + "/" + std::to_string(q.n);
}

namespace {

void append_list(std::string& out, const std::vector<Tally>& qs) {
  out += '[';
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (i) out += ',';
    out += print_tally(qs[i]);
  }
  out += ']';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ == text_.size(); }
  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  bool starts_with(std::string_view w) const { return text_.substr(pos_).starts_with(w); }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void expect(std::string_view w) {
    if (!starts_with(w)) fail("expected '" + std::string(w) + "'");
    pos_ += w.size();
  }

  int integer() {
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(*first)))
      fail("expected integer");
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc()) fail("integer out of range");
    pos_ += static_cast<std::size_t>(ptr - first);
    return value;
  }

  std::string word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a decision name");
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  Tally tally() {
    int t = integer();
    expect('/');
    int n = integer();
    return {t, n};
  }

  std::vector<Tally> tally_list() {
    std::vector<Tally> out;
    expect('[');
    if (peek(']')) {
      ++pos_;
      return out;
    }
    out.push_back(tally());
    while (peek(',')) {
      ++pos_;
      out.push_back(tally());
    }
    expect(']');
    return out;
  }

  EscalationState state() {
    EscalationState s;
    s.lower = tally_list();
    expect('-');
    s.higher = tally_list();
    return s;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string print_state(const EscalationState& s) {
  std::string out;
  append_list(out, s.lower);
  out += '-';
  append_list(out, s.higher);
  return out;
}

std::string print_event(const PathEvent& e) {
  if (const auto* d = std::get_if<Decision>(&e)) return decision_name(*d);
  if (const auto* s = std::get_if<EscalationState>(&e)) return print_state(*s);
  return "recommend_dose(" + std::to_string(std::get<Recommendation>(e).dose) + ")";
}

std::string print_path(const TrialPath& path) {
  std::string out = "[";
  for (std::size_t i = 0; i < path.events.size(); ++i) {
    if (i) out += ',';
    out += print_event(path.events[i]);
  }
  return out + "].";
}

Tally parse_tally(std::string_view text, const ProtocolConfig& config) {
  Reader r(text);
  Tally q = r.tally();
  if (!r.at_end()) r.fail("trailing input");
  return validate_tally(q.t, q.n, config);
}

EscalationState parse_state(std::string_view text, const ProtocolConfig& config) {
  Reader r(text);
  EscalationState s = r.state();
  if (!r.at_end()) r.fail("trailing input");
  validate_state(s, config);
  return s;
}

TrialPath parse_path(std::string_view text, const ProtocolConfig& config) {
  Reader r(text);
  TrialPath path;
  r.expect('[');
  bool first = true;
  while (!r.peek(']')) {
    if (!first) r.expect(',');
    first = false;
    if (r.peek('[')) {
      EscalationState s = r.state();
      validate_state(s, config);
      path.events.emplace_back(std::move(s));
    } else if (r.starts_with("recommend_dose(")) {
      r.expect("recommend_dose(");
      int rec = r.integer();
      r.expect(')');
      path.events.emplace_back(Recommendation{rec});
    } else {
      std::size_t at = r.pos();
      std::string w = r.word();
      try {
        path.events.emplace_back(decision_from_name(w));
      } catch (const ValidationError&) {
        throw ParseError("unknown decision '" + w + "'", at);
      }
    }
  }
  r.expect(']');
  r.expect('.');
  if (!r.at_end()) r.fail("trailing input");
  return path;
}

std::vector<int> parse_int_list(std::string_view text) {
  Reader r(text);
  std::vector<int> out{r.integer()};
  while (r.peek(',')) {
    r.expect(',');
    out.push_back(r.integer());
  }
  if (!r.at_end()) r.fail("trailing input");
  return out;
}

}  // namespace rcdose
