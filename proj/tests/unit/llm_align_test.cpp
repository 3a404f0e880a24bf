#include <doctest.h>

#include <functional>
#include <random>
#include <string>

#include "bitalign/errors.hpp"
#include "bitalign/llm_align.hpp"
#include "bitalign/prompt.hpp"
#include "common/oracles.hpp"
#include "common/test_helpers.hpp"

using namespace bitalign;
using test_support::TempDir;
using test_support::write_file;

namespace {

MappingRecord rec(std::vector<std::int64_t> s, std::vector<std::int64_t> t) {
  return MappingRecord{std::move(s), std::move(t)};
}

Document make_doc(std::size_t n, std::string id, std::string role) {
  Document doc;
  doc.doc_id = std::move(id);
  doc.language = std::move(role);
  for (std::size_t i = 0; i < n; ++i)
    doc.sentences.push_back({i, "sentence " + std::to_string(i)});
  return doc;
}

ErrorCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("extract_json finds the value across wrappings") {
  const std::string clean = R"({"alignments":[{"src":[0],"tgt":[0]}]})";

  SUBCASE("bare object") {
    auto r = extract_json(clean);
    REQUIRE(r.alignments.size() == 1);
    CHECK(r.alignments[0].src == std::vector<std::int64_t>{0});
    CHECK(r.alignments[0].tgt == std::vector<std::int64_t>{0});
  }
  SUBCASE("markdown fence") {
    CHECK(extract_json("```json\n" + clean + "\n```").alignments.size() == 1);
  }
  SUBCASE("fence without language tag") {
    CHECK(extract_json("```\n" + clean + "\n```\n").alignments.size() == 1);
  }
  SUBCASE("prose before and after") {
    CHECK(extract_json("Sure! Here is the mapping:\n" + clean +
                       "\nLet me know if you need more.")
              .alignments.size() == 1);
  }
  SUBCASE("bare array is the alignments list") {
    auto r = extract_json(R"([{"src":[0],"tgt":[1]},{"src":[1],"tgt":[2]}])");
    REQUIRE(r.alignments.size() == 2);
    CHECK(r.alignments[1].tgt == std::vector<std::int64_t>{2});
  }
  SUBCASE("braces inside strings do not derail the scan") {
    auto r = extract_json("note: {\"alignments\":[{\"src\":[0],\"tgt\":[0]}],"
                          "\"note\":\"{ not a block }\"}");
    CHECK(r.alignments.size() == 1);
  }
  SUBCASE("an unbalanced opener is skipped for a later complete value") {
    CHECK(extract_json("{ oops\n" + clean).alignments.size() == 1);
  }
  SUBCASE("extra keys on records are tolerated") {
    auto r = extract_json(
        R"({"alignments":[{"src":[0],"tgt":[0],"confidence":0.9}]})");
    CHECK(r.alignments.size() == 1);
  }
  SUBCASE("empty alignments decode to an empty response") {
    CHECK(extract_json(R"({"alignments":[]})").alignments.empty());
  }
}

TEST_CASE("extract_json rejects malformed responses") {
  auto code = [](std::string_view raw) {
    return thrown_code([&] { (void)extract_json(raw); });
  };
  CHECK(code("no json here at all") == ErrorCode::JsonNotFound);
  CHECK(code("") == ErrorCode::JsonNotFound);
  CHECK(code("{ \"alignments\": [ broken") == ErrorCode::JsonNotFound);
  // the first parseable value is authoritative, even when it is a stray
  // bracket expression in prose ahead of the real object
  CHECK(code("pick [0] maybe, or use "
             R"({"alignments":[{"src":[0],"tgt":[0]}]})") ==
        ErrorCode::SchemaInvalid);
  CHECK(code(R"({"mappings":[{"src":[0],"tgt":[0]}]})") ==
        ErrorCode::SchemaInvalid);
  CHECK(code(R"({"alignments":{"src":[0],"tgt":[0]}})") ==
        ErrorCode::SchemaInvalid);
  CHECK(code(R"({"alignments":[{"src":"0","tgt":[0]}]})") ==
        ErrorCode::SchemaInvalid);
  CHECK(code(R"({"alignments":[{"src":[0]}]})") == ErrorCode::SchemaInvalid);
  CHECK(code(R"({"alignments":[{"src":[0],"tgt":[1.5]}]})") ==
        ErrorCode::SchemaInvalid);
  CHECK(code(R"({"alignments":[42]})") == ErrorCode::SchemaInvalid);
  CHECK(code(R"([["not","records"]])") == ErrorCode::SchemaInvalid);
}

TEST_CASE("mappings_to_beads passes clean responses through") {
  MappingResponse resp{{rec({0}, {0}), rec({1}, {1, 2})}};
  auto [ladder, report] = mappings_to_beads(resp, 2, 3);
  CHECK(render_ladder(ladder) == "0:0\n1:1,2\n");
  CHECK(report.is_gold_valid);
  CHECK(report.out_of_range.empty());
  CHECK(report.duplicate_coverage.empty());
  CHECK(report.monotonicity_violations == 0);
}

TEST_CASE("repair drops out-of-range indices and empty remainders") {
  MappingResponse resp{{rec({0}, {0}), rec({1}, {99})}};
  auto [ladder, report] = mappings_to_beads(resp, 2, 2);
  CHECK(render_ladder(ladder) == "0:0\n");
  CHECK(!report.is_gold_valid);
  REQUIRE(report.out_of_range.size() == 1);
  CHECK(report.out_of_range[0].side == Side::Target);
  CHECK(report.out_of_range[0].index == 99);
  bool saw_drop = false;
  for (const auto& line : report.log)
    if (line.find("dropped") != std::string::npos) saw_drop = true;
  CHECK(saw_drop);
}

TEST_CASE("repair strips coverage conflicts, earlier record wins") {
  MappingResponse resp{{rec({0}, {0}), rec({0}, {1})}};
  auto [ladder, report] = mappings_to_beads(resp, 1, 2);
  CHECK(render_ladder(ladder) == "0:0\n");
  REQUIRE(report.duplicate_coverage.size() == 1);
  CHECK(report.duplicate_coverage[0].side == Side::Source);
  CHECK(report.duplicate_coverage[0].index == 0);
  // keeper listed first
  CHECK(report.duplicate_coverage[0].bead_positions ==
        std::vector<std::size_t>{0, 1});
}

TEST_CASE("a side the model left empty stays a null bead") {
  MappingResponse resp{{rec({0}, {0}), rec({}, {1})}};
  auto [ladder, report] = mappings_to_beads(resp, 1, 2);
  CHECK(render_ladder(ladder) == "0:0\n:1\n");
  CHECK(report.is_gold_valid);
}

TEST_CASE("sort and dedup are normalization, not repair") {
  MappingResponse resp{{rec({1, 0, 1}, {0})}};
  auto [ladder, report] = mappings_to_beads(resp, 2, 1);
  CHECK(render_ladder(ladder) == "0,1:0\n");
  CHECK(report.is_gold_valid);
  bool noted = false;
  for (const auto& line : report.log)
    if (line.find("deduplicated") != std::string::npos) noted = true;
  CHECK(noted);
}

TEST_CASE("strict mode throws on the first violation") {
  RepairPolicy strict{RepairMode::Strict};

  SUBCASE("src range checked before tgt range") {
    try {
      mappings_to_beads({{rec({9}, {9})}}, 2, 2, strict);
      FAIL("expected IndexOutOfRange");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IndexOutOfRange);
      CHECK(std::string(e.what()).find("src index 9") != std::string::npos);
      CHECK(std::string(e.what()).find("[0, 2)") != std::string::npos);
    }
  }
  SUBCASE("coverage overlap names the earlier owner") {
    try {
      mappings_to_beads({{rec({0}, {0}), rec({0}, {1})}}, 1, 2, strict);
      FAIL("expected DuplicateCoverage");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::DuplicateCoverage);
      CHECK(std::string(e.what()).find("record 1") != std::string::npos);
    }
  }
  SUBCASE("range violations outrank coverage violations") {
    // record 2 both duplicates src 0 and overflows tgt; range wins
    CHECK(thrown_code([&] {
            mappings_to_beads({{rec({0}, {0}), rec({0}, {9})}}, 1, 2, strict);
          }) == ErrorCode::IndexOutOfRange);
  }
}

TEST_CASE("repair is idempotent on already-valid ladders") {
  std::mt19937 rng(20260822u);
  for (int round = 0; round < 25; ++round) {
    const std::size_t src_len = 1 + rng() % 8, tgt_len = 1 + rng() % 8;
    const Ladder gold = test_support::random_ladder(rng, src_len, tgt_len);
    MappingResponse resp;
    for (const Bead& b : gold.beads) {
      MappingRecord r;
      r.src.assign(b.src.begin(), b.src.end());
      r.tgt.assign(b.tgt.begin(), b.tgt.end());
      resp.alignments.push_back(std::move(r));
    }
    auto [ladder, report] = mappings_to_beads(resp, src_len, tgt_len);
    CHECK(report.is_gold_valid);
    CHECK(render_ladder(ladder) == render_ladder(gold));
  }
}

TEST_CASE("empty outcomes raise the matching errors") {
  CHECK(thrown_code([] { mappings_to_beads({}, 2, 2); }) ==
        ErrorCode::EmptyResult);
  CHECK(thrown_code([] {
          mappings_to_beads({{rec({5}, {5})}}, 2, 2);
        }) == ErrorCode::EmptyResult);
  CHECK(thrown_code([] { mappings_to_beads({{rec({0}, {0})}}, 0, 2); }) ==
        ErrorCode::EmptyInput);
}

TEST_CASE("plan_chunks: zero size means one whole-document chunk") {
  auto plan = plan_chunks(7, 9, 0, 2);
  REQUIRE(plan.chunks.size() == 1);
  CHECK(plan.chunks[0].src_lo == 0);
  CHECK(plan.chunks[0].src_hi == 7);
  CHECK(plan.chunks[0].tgt_lo == 0);
  CHECK(plan.chunks[0].tgt_hi == 9);
}

TEST_CASE("plan_chunks: proportional windows widened by the margin") {
  auto plan = plan_chunks(10, 20, 5, 2);
  REQUIRE(plan.chunks.size() == 2);
  CHECK(plan.chunks[0].src_lo == 0);
  CHECK(plan.chunks[0].src_hi == 5);
  CHECK(plan.chunks[0].tgt_lo == 0);
  CHECK(plan.chunks[0].tgt_hi == 12);
  CHECK(plan.chunks[1].src_lo == 5);
  CHECK(plan.chunks[1].src_hi == 10);
  CHECK(plan.chunks[1].tgt_lo == 8);
  CHECK(plan.chunks[1].tgt_hi == 20);
}

TEST_CASE("plan_chunks: chunks partition the source, windows cover the target") {
  std::mt19937 rng(7u);
  for (int round = 0; round < 200; ++round) {
    const std::size_t src_len = 1 + rng() % 50;
    const std::size_t tgt_len = 1 + rng() % 50;
    const std::size_t chunk = 1 + rng() % 10;
    const std::size_t margin = rng() % 4;
    auto plan = plan_chunks(src_len, tgt_len, chunk, margin);
    REQUIRE(!plan.chunks.empty());
    std::size_t expect_lo = 0;
    std::size_t tgt_reached = 0;
    for (const auto& c : plan.chunks) {
      CHECK(c.src_lo == expect_lo);
      CHECK(c.src_hi > c.src_lo);
      CHECK(c.src_hi - c.src_lo <= chunk);
      CHECK(c.tgt_lo <= c.tgt_hi);
      CHECK(c.tgt_hi <= tgt_len);
      CHECK(c.tgt_lo <= tgt_reached);  // no gap in target coverage
      tgt_reached = std::max(tgt_reached, c.tgt_hi);
      expect_lo = c.src_hi;
    }
    CHECK(expect_lo == src_len);
    CHECK(tgt_reached == tgt_len);
  }
}

TEST_CASE("align_document runs the whole pipeline against a mock") {
  Document src = make_doc(3, "pairA", "src");
  Document tgt = make_doc(3, "pairA", "tgt");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_response =
      R"({"alignments":[{"src":[0],"tgt":[0]},{"src":[1],"tgt":[1]},{"src":[2],"tgt":[2]}]})";

  auto [ladder, report] =
      align_document(src, tgt, default_prompt_template(), config);
  CHECK(render_ladder(ladder) == "0:0\n1:1\n2:2\n");
  CHECK(ladder.pair_id == "pairA");
  CHECK(report.is_gold_valid);
}

TEST_CASE("align_document merges chunk results on global indices") {
  TempDir tmp;
  Document src = make_doc(4, "pairB", "src");
  Document tgt = make_doc(4, "pairB", "tgt");
  write_file(tmp.file("pairB.chunk0.txt"),
             R"({"alignments":[{"src":[0],"tgt":[0]},{"src":[1],"tgt":[1]}]})");
  write_file(tmp.file("pairB.chunk1.txt"),
             R"({"alignments":[{"src":[2],"tgt":[2]},{"src":[3],"tgt":[3]}]})");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_dir = tmp.path();
  AlignOptions options;
  options.chunk_size_src = 2;

  auto [ladder, report] = align_document(src, tgt, default_prompt_template(),
                                         config, options);
  CHECK(render_ladder(ladder) == "0:0\n1:1\n2:2\n3:3\n");
  CHECK(report.is_gold_valid);

  // byte-determinism across runs
  auto [again, report2] = align_document(src, tgt, default_prompt_template(),
                                         config, options);
  CHECK(render_ladder(again) == render_ladder(ladder));
}

TEST_CASE("cross-chunk coverage conflicts resolve to the earlier chunk") {
  TempDir tmp;
  Document src = make_doc(4, "pairC", "src");
  Document tgt = make_doc(4, "pairC", "tgt");
  // both chunks claim target 1
  write_file(tmp.file("pairC.chunk0.txt"),
             R"({"alignments":[{"src":[0],"tgt":[0]},{"src":[1],"tgt":[1]}]})");
  write_file(tmp.file("pairC.chunk1.txt"),
             R"({"alignments":[{"src":[2],"tgt":[1,2]},{"src":[3],"tgt":[3]}]})");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_dir = tmp.path();
  AlignOptions options;
  options.chunk_size_src = 2;

  auto [ladder, report] = align_document(src, tgt, default_prompt_template(),
                                         config, options);
  CHECK(render_ladder(ladder) == "0:0\n1:1\n2:2\n3:3\n");
  CHECK(!report.is_gold_valid);
  REQUIRE(!report.duplicate_coverage.empty());
  CHECK(report.duplicate_coverage[0].side == Side::Target);
  CHECK(report.duplicate_coverage[0].index == 1);

  SUBCASE("strict mode refuses the same overlap") {
    AlignOptions strict = options;
    strict.policy.mode = RepairMode::Strict;
    CHECK(thrown_code([&] {
            align_document(src, tgt, default_prompt_template(), config, strict);
          }) == ErrorCode::DuplicateCoverage);
  }
}

TEST_CASE("a failing chunk is reported with its position") {
  TempDir tmp;
  Document src = make_doc(4, "pairD", "src");
  Document tgt = make_doc(4, "pairD", "tgt");
  write_file(tmp.file("pairD.chunk0.txt"),
             R"({"alignments":[{"src":[0],"tgt":[0]},{"src":[1],"tgt":[1]}]})");
  write_file(tmp.file("pairD.chunk1.txt"), "total garbage, no json");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_dir = tmp.path();
  AlignOptions options;
  options.chunk_size_src = 2;

  try {
    align_document(src, tgt, default_prompt_template(), config, options);
    FAIL("expected JsonNotFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::JsonNotFound);
    CHECK(e.chunk_index() == 1);
    CHECK(std::string(e.what()).find("chunk 2/2") != std::string::npos);
  }
}

TEST_CASE("align_document rejects empty documents") {
  Document src = make_doc(0, "p", "src");
  Document tgt = make_doc(2, "p", "tgt");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_response = "{}";
  CHECK(thrown_code([&] {
          align_document(src, tgt, default_prompt_template(), config);
        }) == ErrorCode::EmptyDocument);
}

TEST_CASE("pair_id can be overridden per run") {
  Document src = make_doc(1, "doc-name", "src");
  Document tgt = make_doc(1, "doc-name", "tgt");
  LlmConfig config;
  config.backend = BackendKind::Mock;
  config.mock_response = R"({"alignments":[{"src":[0],"tgt":[0]}]})";
  AlignOptions options;
  options.pair_id = "override";
  auto [ladder, report] =
      align_document(src, tgt, default_prompt_template(), config, options);
  CHECK(ladder.pair_id == "override");
}
