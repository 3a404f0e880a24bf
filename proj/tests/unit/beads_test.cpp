#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "bitalign/beads.hpp"
#include "bitalign/errors.hpp"
#include "common/oracles.hpp"
#include "common/test_helpers.hpp"

using namespace bitalign;
using test_support::TempDir;
using test_support::write_file;

TEST_CASE("parse_ladder reads the SRC:TGT line format") {
  const Ladder ladder = parse_ladder("0:0\n1:1,2\n2,3:3\n:4\n5:\n");
  REQUIRE(ladder.beads.size() == 5);
  CHECK(ladder.beads[0] == Bead{{0}, {0}});
  CHECK(ladder.beads[1] == Bead{{1}, {1, 2}});
  CHECK(ladder.beads[2] == Bead{{2, 3}, {3}});
  CHECK(ladder.beads[3] == Bead{{}, {4}});
  CHECK(ladder.beads[4] == Bead{{5}, {}});
}

TEST_CASE("parse_ladder skips comments, blanks, CRLF and padding") {
  const Ladder ladder =
      parse_ladder("# gold alignment\n\n  0:0 \r\n\n# done\n1:1\r\n");
  REQUIRE(ladder.beads.size() == 2);
  CHECK(ladder.beads[0] == Bead{{0}, {0}});
  CHECK(ladder.beads[1] == Bead{{1}, {1}});
}

TEST_CASE("parse_ladder normalizes unsorted or duplicated indices, warning") {
  std::vector<std::string> warnings;
  const Ladder ladder = parse_ladder("1,0:2\n", "", &warnings);
  CHECK(ladder.beads[0] == Bead{{0, 1}, {2}});
  CHECK(!warnings.empty());

  warnings.clear();
  const Ladder dup = parse_ladder("0,0:1\n", "", &warnings);
  CHECK(dup.beads[0] == Bead{{0}, {1}});
  CHECK(!warnings.empty());
}

TEST_CASE("parse_ladder syntax errors carry 1-based line numbers") {
  auto expect_error = [](const char* text, ErrorCode code, int line) {
    try {
      parse_ladder(text);
      FAIL_CHECK("expected parse error for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == code);
      CHECK(e.line_no() == line);
    }
  };
  expect_error("0:0\nx:0\n", ErrorCode::SyntaxError, 2);
  expect_error("0:0:1\n", ErrorCode::SyntaxError, 1);
  expect_error("1,:2\n", ErrorCode::SyntaxError, 1);
  expect_error("0,,1:2\n", ErrorCode::SyntaxError, 1);
  expect_error("-1:0\n", ErrorCode::SyntaxError, 1);
  expect_error("0 1:2\n", ErrorCode::SyntaxError, 1);
  expect_error("# c\n:\n", ErrorCode::BothSidesEmpty, 2);
  expect_error("99999999999999999999:0\n", ErrorCode::SyntaxError, 1);
}

TEST_CASE("render_ladder emits canonical minimal lines") {
  Ladder ladder;
  ladder.beads = {{{2}, {3}}, {{0}, {0, 1}}, {{}, {2}}};
  // at the shared key 2, the source-bearing bead sorts first
  CHECK(render_ladder(ladder) == "0:0,1\n2:3\n:2\n");
}

TEST_CASE("canonical order keys on min source index, null beads by target") {
  Ladder ladder;
  ladder.beads = {{{}, {5}}, {{3}, {4}}, {{}, {0}}, {{0, 1}, {1}}, {{2}, {}}};
  canonicalize(ladder);
  // equal keys put the source-bearing bead first
  CHECK(ladder.beads[0] == Bead{{0, 1}, {1}});
  CHECK(ladder.beads[1] == Bead{{}, {0}});
  CHECK(ladder.beads[2] == Bead{{2}, {}});
  CHECK(ladder.beads[3] == Bead{{3}, {4}});
  CHECK(ladder.beads[4] == Bead{{}, {5}});
}

TEST_CASE("round trip: parse(render(x)) == x for random canonical ladders") {
  std::mt19937 rng(20260822);
  for (int it = 0; it < 50; ++it) {
    const auto ladder = test_support::random_ladder(rng, 1 + it % 9, 1 + (it * 7) % 9);
    const std::string text = render_ladder(ladder);
    const Ladder back = parse_ladder(text);
    CHECK(back.beads == ladder.beads);
    CHECK(render_ladder(back) == text);  // idempotent
  }
}

TEST_CASE("validate_ladder flags out-of-range indices") {
  Ladder ladder = parse_ladder("0:0\n1:5\n");
  const ValidationReport report = validate_ladder(ladder, 2, 2);
  REQUIRE(report.out_of_range.size() == 1);
  CHECK(report.out_of_range[0].bead_pos == 1);
  CHECK(report.out_of_range[0].side == Side::Target);
  CHECK(report.out_of_range[0].index == 5);
  CHECK_FALSE(report.is_gold_valid);
}

TEST_CASE("validate_ladder flags duplicate coverage with both positions") {
  Ladder ladder = parse_ladder("0:0\n0:1\n");
  const ValidationReport report = validate_ladder(ladder, 2, 2);
  REQUIRE(report.duplicate_coverage.size() == 1);
  CHECK(report.duplicate_coverage[0].side == Side::Source);
  CHECK(report.duplicate_coverage[0].index == 0);
  CHECK(report.duplicate_coverage[0].bead_positions ==
        std::vector<std::size_t>{0, 1});
  CHECK_FALSE(report.is_gold_valid);
}

TEST_CASE("validate_ladder counts crossing target spans as monotonicity hits") {
  // 0:2 then 1:0,1 steps backwards on the target side
  Ladder ladder = parse_ladder("0:2\n1:0,1\n");
  const ValidationReport report = validate_ladder(ladder, 2, 3);
  CHECK(report.monotonicity_violations == 1);
  CHECK(report.is_gold_valid);  // crossing is legal, only reported

  Ladder clean = parse_ladder("0:0\n1:1,2\n");
  CHECK(validate_ladder(clean, 2, 3).monotonicity_violations == 0);
}

TEST_CASE("validate_ladder accepts a gold cover") {
  const Ladder ladder = parse_ladder("0:0\n1:1,2\n2,3:3\n");
  const ValidationReport report = validate_ladder(ladder, 4, 4);
  CHECK(report.out_of_range.empty());
  CHECK(report.duplicate_coverage.empty());
  CHECK(report.is_gold_valid);
}

TEST_CASE("load_ladder reads files and defaults pair_id to the stem") {
  TempDir tmp;
  write_file(tmp.file("easy1.ladder"), "0:0\n1:1\n");
  const Ladder ladder = load_ladder(tmp.file("easy1.ladder"));
  CHECK(ladder.pair_id == "easy1");
  CHECK(ladder.beads.size() == 2);

  try {
    load_ladder(tmp.file("missing.ladder"));
    FAIL("expected FileNotReadable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FileNotReadable);
  }
}

TEST_CASE("bead_canonical_less is a strict weak order on mixed beads") {
  std::vector<Bead> beads = {{{0}, {0}}, {{}, {0}}, {{}, {1}}, {{1}, {}},
                             {{0, 2}, {1}}, {{2}, {0, 3}}};
  for (const Bead& a : beads) {
    CHECK_FALSE(bead_canonical_less(a, a));
    for (const Bead& b : beads)
      if (bead_canonical_less(a, b)) CHECK_FALSE(bead_canonical_less(b, a));
  }
}
