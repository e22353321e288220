#include "naive_oracle.hpp"

#include <string>

namespace oracle {
namespace {

struct Flat {
  std::vector<std::pair<int, int>> d;  // (t, n) ascending dose order
  int cur = 0;
};

std::string show(const Flat& s) {
  std::string out = "[";
  for (int i = s.cur; i >= 0; --i) {
    out += std::to_string(s.d[i].first) + "/" + std::to_string(s.d[i].second);
    if (i > 0) out += ",";
  }
  out += "]-[";
  for (int i = s.cur + 1; i < static_cast<int>(s.d.size()); ++i) {
    out += std::to_string(s.d[i].first) + "/" + std::to_string(s.d[i].second);
    if (i + 1 < static_cast<int>(s.d.size())) out += ",";
  }
  return out + "]";
}

int target(const Flat& s, int decision) {
  return s.cur + (decision == 0 ? 1 : decision == 1 ? 0 : -1);
}

std::vector<Flat> successors(const Flat& s, int decision, const Options& o) {
  std::vector<Flat> out;
  int j = target(s, decision);
  if (j < 0 || j >= static_cast<int>(s.d.size())) return out;
  for (int c : o.cohort_sizes) {
    for (int k = c; k >= 0; --k) {
      if (s.d[j].second + c > 6) continue;
      Flat next = s;
      next.d[j].first += k;
      next.d[j].second += c;
      next.cur = j;
      out.push_back(next);
    }
  }
  return out;
}

bool regrettable(const Flat& s, int decision, const Options& o) {
  int j = target(s, decision);
  auto [t0, n0] = s.d[s.cur];
  auto [told, nold] = s.d[j];
  for (int c : o.cohort_sizes) {
    for (int k = c; k >= 0; --k) {
      int t = told + k;
      int n = nold + c;
      bool r = disjunction(decision, n0, n, t0, t);
      if (!o.dlt_cap) {
        // without the cap only the first disjuncts remain
        r = decision == 0 ? !(n0 >= 3 && t0 * 6 <= n0)
          : decision == 2 ? (t0 <= 1 && n0 >= 3 && n > 0 && t * 6 < n)
                          : false;
      }
      if (r) return true;
    }
  }
  return false;
}

int next(const Flat& s, const Options& o) {
  for (int e = 0; e < 3; ++e) {
    if (successors(s, e, o).empty()) continue;
    if (regrettable(s, e, o)) continue;
    return e;
  }
  return 3;
}

void walk(const Flat& s, const std::string& prefix, const Options& o, Result& r) {
  r.states.insert(show(s));
  static const char* names[] = {"esc", "sta", "des", "stop"};
  int e = next(s, o);
  if (e == 3) {
    auto [t, n] = s.d[s.cur];
    int rec = t * 6 > n ? s.cur : s.cur + 1;
    r.paths.insert(prefix + "stop,recommend_dose(" + std::to_string(rec) + ")].");
    return;
  }
  for (const Flat& nx : successors(s, e, o))
    walk(nx, prefix + names[e] + "," + show(nx) + ",", o, r);
}

}  // namespace

bool disjunction(int decision, int A, int B, int C, int D) {
  switch (decision) {
    case 0: return (0 == 1) || !(A >= 3 && C * 6 <= A) || D >= 5;
    case 1: return (0 == 1) || D >= 5;
    default: return (0 == 1) || (C <= 1 && A >= 3 && (B > 0 && D * 6 < B)) || D >= 5;
  }
}

Result enumerate_from(std::vector<std::pair<int, int>> tallies, int cursor,
                      const Options& opts) {
  Result r;
  walk(Flat{std::move(tallies), cursor}, "[", opts, r);
  return r;
}

Result enumerate(int doses, const Options& opts) {
  return enumerate_from(std::vector<std::pair<int, int>>(doses, {0, 0}), 0, opts);
}

}  // namespace oracle
