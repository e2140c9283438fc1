#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "thomflow/claims.hpp"

using namespace thomflow;

namespace {

const std::vector<ClaimRecord>& all_records() {
  static const std::vector<ClaimRecord> records = run_all();
  return records;
}

const ClaimRecord& find(const std::string& id) {
  const auto& recs = all_records();
  auto it = std::find_if(recs.begin(), recs.end(),
                         [&](const ClaimRecord& r) { return r.id == id; });
  EXPECT_NE(it, recs.end());
  return *it;
}

double scalar(const ClaimValue& v) { return std::get<double>(v); }

}  // namespace

TEST(Claims, EveryAssertPasses) {
  for (const auto& rec : all_records()) {
    if (rec.kind == ClaimKind::check) {
      EXPECT_EQ(rec.verdict, Verdict::pass)
          << rec.id << " residual " << rec.residual << " tol " << rec.tolerance
          << " " << rec.diagnostic;
    } else {
      EXPECT_EQ(rec.verdict, Verdict::info) << rec.id << " " << rec.diagnostic;
    }
  }
}

TEST(Claims, KindsMatchLedger) {
  const std::set<std::string> reports = {"C8", "C13", "C14"};
  ASSERT_EQ(all_records().size(), 14u);
  for (const auto& rec : all_records()) {
    EXPECT_EQ(rec.kind == ClaimKind::report, reports.count(rec.id) == 1) << rec.id;
    EXPECT_FALSE(rec.paper_ref.empty()) << rec.id;
  }
}

// Each property of the construction maps to at least one claim.
TEST(Claims, CoverageTable) {
  const std::map<std::string, std::vector<std::string>> coverage = {
      {"curve tends to the origin", {"C1"}},
      {"curve speed", {"C2"}},
      {"tail length bracket", {"C3"}},
      {"length over distance tends to 1", {"C4", "C14"}},
      {"secant has no limit", {"C5", "C14"}},
      {"function on the curve", {"C6"}},
      {"angular partial on the curve", {"C7"}},
      {"radial partial on the curve", {"C8"}},
      {"gradient as a multiple of the tangent", {"C9", "C12", "C13"}},
      {"positive multiplier", {"C10"}},
      {"infinitely flat critical point", {"C11"}},
      {"curve is a gradient line", {"C12", "C13", "C14"}},
  };
  std::set<std::string> ids(claim_ids().begin(), claim_ids().end());
  std::set<std::string> covered;
  for (const auto& [property, claims] : coverage) {
    ASSERT_FALSE(claims.empty()) << property;
    for (const auto& id : claims) {
      EXPECT_TRUE(ids.count(id)) << id;
      covered.insert(id);
    }
  }
  EXPECT_EQ(covered, ids);
}

TEST(Claims, RunAllIsDeterministic) {
  const auto again = run_all();
  ASSERT_EQ(again.size(), all_records().size());
  for (std::size_t i = 0; i < again.size(); ++i) {
    EXPECT_EQ(again[i].id, all_records()[i].id);
    EXPECT_EQ(again[i].residual, all_records()[i].residual) << again[i].id;
    EXPECT_EQ(again[i].verdict, all_records()[i].verdict);
  }
}

TEST(Claims, RadialPartialAtHalf) {
  ClaimGrid g;
  g.r_count = 1;
  g.r_min = g.r_max = 0.5;
  const ClaimRecord rec = run_claim("C8", g);
  EXPECT_EQ(rec.verdict, Verdict::info);
  EXPECT_NEAR(scalar(rec.paper_value), 0.058049705704773277, 1e-15);
  EXPECT_NEAR(scalar(rec.oracle_value), 0.29969541932561202, 1e-15);
  EXPECT_GT(rec.residual, 0.5);
}

TEST(Claims, RadialPartialDisagreesAcrossGrid) {
  const ClaimRecord& rec = find("C8");
  EXPECT_GT(rec.residual, 0.5);
}

TEST(Claims, AngularPartialAtHalf) {
  ClaimGrid g;
  g.r_count = 1;
  g.r_min = g.r_max = 0.5;
  const ClaimRecord rec = run_claim("C7", g);
  EXPECT_EQ(rec.verdict, Verdict::pass);
  EXPECT_NEAR(scalar(rec.paper_value), -0.083748022545340175, 1e-15);
  EXPECT_LE(rec.residual, 1e-10);
}

TEST(Claims, TangencyResidualsSplitByField) {
  EXPECT_LT(find("C12").residual, 1e-9);
  EXPECT_GT(find("C13").residual, 1e-2);
}

TEST(Claims, FlowReportHasBothRuns) {
  const ClaimRecord& rec = find("C14");
  std::set<std::string> keys;
  for (const auto& [k, v] : rec.details) keys.insert(k);
  for (const char* k : {"oracle_winding_count", "displayed_winding_count",
                        "oracle_tangent_exists", "displayed_ratio"}) {
    EXPECT_TRUE(keys.count(k)) << k;
  }
}

TEST(Claims, ExceptionsBecomeFailures) {
  ClaimGrid g;
  g.t_min = 1.0;  // outside the curve's parameter range
  const ClaimRecord rec = run_claim("C1", g);
  EXPECT_EQ(rec.verdict, Verdict::fail);
  EXPECT_FALSE(rec.diagnostic.empty());
}

TEST(Claims, UnknownIdThrows) {
  EXPECT_THROW(run_claim("C99"), std::invalid_argument);
}
