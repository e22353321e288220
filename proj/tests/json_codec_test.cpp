#include <gtest/gtest.h>

#include "rcdose/canonical_text.hpp"
#include "rcdose/json_codec.hpp"
#include "rcdose/property_verifier.hpp"
#include "rcdose/trial_session.hpp"

namespace rcdose {
namespace {

TEST(Json, StateShape) {
  const Json j = parse_state("[2/6,0/3]-[0/0]");
  EXPECT_EQ(j, Json::parse(R"({"lower":[{"t":2,"n":6},{"t":0,"n":3}],
                               "higher":[{"t":0,"n":0}],"text":"[2/6,0/3]-[0/0]"})"));
  EXPECT_EQ(j.get<EscalationState>(), parse_state("[2/6,0/3]-[0/0]"));
}

TEST(Json, ConfigDefaultsFillMissingFields) {
  const auto c = Json::parse(R"({"cohort_sizes":[3,2,1]})").get<ProtocolConfig>();
  EXPECT_EQ(c.cohort_sizes, (std::vector<int>{3, 2, 1}));
  EXPECT_EQ(c.max_denominator, 6);
  EXPECT_EQ(c.regret_rules, RegretRuleSet{});
  ProtocolConfig custom;
  custom.regret_rules.dlt_cap_clause = false;
  custom.max_doses = 5;
  EXPECT_EQ(Json(custom).get<ProtocolConfig>(), custom);
  EXPECT_THROW(Json::parse(R"({"cohort_sizes":"3"})").get<ProtocolConfig>(), Json::exception);
}

TEST(Json, JournalEntriesRoundTrip) {
  TrialSession s = create_trial({}, 2, "x");
  s = record_cohort(s, 3, 1);
  s = undo_last(s);
  for (const JournalEntry& e : s.journal) EXPECT_EQ(Json(e).get<JournalEntry>(), e);
  const Json rec = s.journal[1];
  EXPECT_EQ(rec["kind"], "cohort_recorded");
  EXPECT_EQ(rec["decision"], "sta");
  EXPECT_EQ(rec["size"], 3);
  EXPECT_EQ(rec["dlts"], 1);
  EXPECT_EQ(Json(s.journal[2])["target"], 2);
  EXPECT_THROW(Json::parse(R"({"seq":1,"timestamp":"","kind":"teleported"})").get<JournalEntry>(),
               std::exception);
}

TEST(Json, PathAndReport) {
  const TrialPath p = parse_path("[sta,[2/3]-[0/0],stop,recommend_dose(0)].");
  const Json jp = p;
  EXPECT_EQ(jp["text"], "[sta,[2/3]-[0/0],stop,recommend_dose(0)].");
  EXPECT_EQ(jp["events"].size(), 4u);
  EXPECT_EQ(jp["events"][3]["recommend_dose"], 0);

  const Json r = check_liveness({1, 2});
  EXPECT_EQ(r["property"], "liveness");
  EXPECT_EQ(r["holds"], true);
  EXPECT_EQ(r["doses_checked"], Json::parse("[1,2]"));
  EXPECT_TRUE(r.contains("elapsed_ms"));
}

}  // namespace
}  // namespace rcdose
