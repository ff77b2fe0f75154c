#include <catch2/catch_amalgamated.hpp>

#include "bicalc/verify.hpp"

using namespace bicalc;

TEST_CASE("difference suite is clean over 1000 trials") {
  const verify::SuiteResult r = verify::difference_suite(42, 1000);
  for (const auto& c : r.checks) {
    INFO(c.name << " failures=" << c.failures << " worst=" << c.worst);
    CHECK(c.pass());
  }
}

TEST_CASE("derivative suite is clean") {
  const verify::SuiteResult r = verify::derivative_suite(7, 12);
  for (const auto& c : r.checks) {
    INFO(c.name << " failures=" << c.failures << " worst=" << c.worst);
    CHECK(c.pass());
  }
}

TEST_CASE("integral suite is clean") {
  const verify::SuiteResult r = verify::integral_suite(3, 40);
  for (const auto& c : r.checks) {
    INFO(c.name << " failures=" << c.failures << " worst=" << c.worst);
    CHECK(c.pass());
  }
}

TEST_CASE("suites are deterministic in the seed") {
  const verify::SuiteResult a = verify::difference_suite(5, 50);
  const verify::SuiteResult b = verify::difference_suite(5, 50);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t k = 0; k < a.checks.size(); ++k) {
    CHECK(a.checks[k].worst == b.checks[k].worst);
    CHECK(a.checks[k].failures == b.checks[k].failures);
  }
}
