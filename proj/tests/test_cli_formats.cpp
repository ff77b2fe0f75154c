#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bicalc/cli_parse.hpp"

using namespace bicalc;
using namespace bicalc::cli;

TEST_CASE("point parsing") {
  const Point2 p = parse_point("1.5,-2e-3");
  CHECK(p.x1 == 1.5);
  CHECK(p.x2 == -2e-3);
  CHECK_THROWS_AS(parse_point("1.5"), CliError);
  CHECK_THROWS_AS(parse_point("a,b"), CliError);
  CHECK_THROWS_AS(parse_point("inf,0"), CliError);  // points must be finite
}

TEST_CASE("tuple parsing") {
  const auto t = parse_tuple("1,2,3.5");
  REQUIRE(t.size() == 3);
  CHECK(t[2] == 3.5);
}

TEST_CASE("interval parsing with closure marks") {
  const Interval2 a = parse_interval("[0,2]x[1,3]");
  CHECK(a.lower.x1 == 0.0);
  CHECK(a.upper.x2 == 3.0);
  CHECK(a.left_closed);
  CHECK(a.top_closed);

  const Interval2 b = parse_interval("(0,1]x(0,1]");
  CHECK_FALSE(b.left_closed);
  CHECK(b.right_closed);
  CHECK_FALSE(b.bottom_closed);
  CHECK(b.top_closed);

  const Interval2 c = parse_interval("(0,inf)x(-1,1)");
  CHECK(std::isinf(c.upper.x1));
  CHECK_FALSE(c.right_closed);

  CHECK_THROWS_AS(parse_interval("[0,2]"), CliError);
  CHECK_THROWS_AS(parse_interval("[2,0]x[0,1]"), CliError);   // empty range
  CHECK_THROWS_AS(parse_interval("[0,inf]x[0,1]"), CliError); // inf edge closed
}

TEST_CASE("sign parsing") {
  CHECK(parse_sign("PP") == QuadrantSign::PP);
  CHECK(parse_sign("+-") == QuadrantSign::PM);
  CHECK(parse_sign("-+") == QuadrantSign::MP);
  CHECK(parse_sign("--") == QuadrantSign::MM);
  CHECK_THROWS_AS(parse_sign("P"), CliError);
}

TEST_CASE("field construction maps parse failures to CliError") {
  CHECK_THROWS_AS(make_field("x1^2 +"), CliError);
  try {
    make_field("x1^2 +");
  } catch (const CliError& e) {
    CHECK(e.code == 2);
    REQUIRE(e.position);
    CHECK(*e.position == 6);
  }
}
