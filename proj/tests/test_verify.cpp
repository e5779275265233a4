#include <gtest/gtest.h>

#include "support.hpp"

using namespace tw_test;

namespace {

bool failed(const VerifyReport& r, const std::string& prefix) {
  for (const auto& c : r.checks)
    if (c.theorem.rfind(prefix, 0) == 0 && !c.passed) return true;
  return false;
}

}  // namespace

TEST(Verify, DefaultSuitePasses) {
  VerifyReport r = verify_suite(VerifyOptions{});
  EXPECT_TRUE(r.passed()) << r.to_text();
  EXPECT_EQ(r.checks.size(), 44u);
  EXPECT_NE(r.to_text().find("all 44 checks passed"), std::string::npos);
}

TEST(Verify, ReportIsDeterministic) {
  VerifyOptions o;
  o.seed = 42;
  EXPECT_EQ(verify_suite(o).to_text(), verify_suite(o).to_text());
  VerifyOptions other = o;
  other.seed = 43;
  EXPECT_NE(verify_suite(o).to_text(), verify_suite(other).to_text());
}

TEST(Verify, OtherSeedsAndQ) {
  for (std::uint64_t seed : {2u, 3u}) {
    VerifyOptions o;
    o.seed = seed;
    o.q_values = {4};
    o.steps = 5;
    auto r = verify_suite(o);
    EXPECT_TRUE(r.passed()) << r.to_text();
  }
}

TEST(Verify, CorruptedPropagatorIsCaught) {
  VerifyOptions o;
  o.q_values = {2};
  o.propagator_scale = Rational(2);
  auto r = verify_suite(o);
  EXPECT_FALSE(r.passed());
  EXPECT_TRUE(failed(r, "energy conservation"));
  EXPECT_TRUE(failed(r, "solution theorem"));
  EXPECT_NE(r.to_text().find("checks failed"), std::string::npos);
}

TEST(Verify, RejectsBadQ) {
  VerifyOptions o;
  o.q_values = {1};
  EXPECT_THROW(verify_suite(o), ParameterError);
}
