#include <doctest.h>

#include "bitalign/format.hpp"

using namespace bitalign;

TEST_CASE("round_half_up rounds exact halves away from zero-ward down") {
  // .125 and .375 are exactly representable, so the half-up rule is visible
  CHECK(round_half_up(0.125, 2) == doctest::Approx(0.13).epsilon(1e-12));
  CHECK(round_half_up(0.375, 2) == doctest::Approx(0.38).epsilon(1e-12));
  CHECK(round_half_up(2.5, 0) == doctest::Approx(3.0));
  CHECK(round_half_up(0.5, 0) == doctest::Approx(1.0));
  CHECK(round_half_up(1.0 / 3.0, 3) == doctest::Approx(0.333).epsilon(1e-12));
  CHECK(round_half_up(2.0 / 3.0, 3) == doctest::Approx(0.667).epsilon(1e-12));
}

TEST_CASE("format_fixed prints the rounded value with fixed decimals") {
  CHECK(format_fixed(0.4, 3) == "0.400");
  CHECK(format_fixed(1.0 / 3.0, 3) == "0.333");
  CHECK(format_fixed(2.0 / 3.0, 3) == "0.667");
  CHECK(format_fixed(1.0, 3) == "1.000");
  CHECK(format_fixed(0.0, 3) == "0.000");
  CHECK(format_fixed(74.27184466019418, 2) == "74.27");
  CHECK(format_fixed(46.0396, 2) == "46.04");
  CHECK(format_fixed(0.125, 2) == "0.13");
  CHECK(format_fixed(50.0, 2) == "50.00");
}
