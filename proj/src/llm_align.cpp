#include "bitalign/llm_align.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <exception>
#include <map>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "bitalign/errors.hpp"

namespace bitalign {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------- extraction

/// Span of the first balanced JSON object/array starting at `start`, or npos
/// when the text ends before it closes.
std::size_t balanced_end(std::string_view raw, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = start; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped)
        escaped = false;
      else if (c == '\\')
        escaped = true;
      else if (c == '"')
        in_string = false;
      continue;
    }
    if (c == '"')
      in_string = true;
    else if (c == '{' || c == '[')
      ++depth;
    else if (c == '}' || c == ']') {
      --depth;
      if (depth <= 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

MappingResponse decode_response(const json& j) {
  const json* list = nullptr;
  if (j.is_array()) {
    list = &j;
  } else if (j.is_object()) {
    const auto it = j.find("alignments");
    if (it == j.end())
      throw Error(ErrorCode::SchemaInvalid,
                  "response object has no \"alignments\" field");
    if (!it->is_array())
      throw Error(ErrorCode::SchemaInvalid, "\"alignments\" must be an array");
    list = &*it;
  } else {
    throw Error(ErrorCode::SchemaInvalid,
                "response must be a JSON object or array");
  }

  MappingResponse response;
  response.alignments.reserve(list->size());
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& rec = (*list)[i];
    if (!rec.is_object())
      throw Error(ErrorCode::SchemaInvalid,
                  "alignment record " + std::to_string(i) + " is not an object");
    MappingRecord out;
    for (const char* side : {"src", "tgt"}) {
      const auto it = rec.find(side);
      if (it == rec.end())
        throw Error(ErrorCode::SchemaInvalid,
                    "alignment record " + std::to_string(i) + " has no \"" +
                        side + "\" field");
      if (!it->is_array())
        throw Error(ErrorCode::SchemaInvalid,
                    "record " + std::to_string(i) + " field \"" + side +
                        "\" must be an array of integers");
      std::vector<std::int64_t>& dst =
          side[0] == 's' ? out.src : out.tgt;
      for (const json& v : *it) {
        if (!v.is_number_integer())
          throw Error(ErrorCode::SchemaInvalid,
                      "record " + std::to_string(i) + " field \"" + side +
                          "\" holds a non-integer element");
        dst.push_back(v.get<std::int64_t>());
      }
    }
    response.alignments.push_back(std::move(out));
  }
  return response;
}

// ------------------------------------------------------------------- repair

/// One mapping record plus where it came from, for audit labels.
struct RawRecord {
  std::vector<std::int64_t> src, tgt;
  int chunk_index = -1;   // -1 when not chunked
  std::size_t ordinal = 0;  // record position within its origin
};

std::string record_label(const RawRecord& r) {
  std::string label;
  if (r.chunk_index >= 0)
    label = "chunk " + std::to_string(r.chunk_index) + " ";
  return label + "record " + std::to_string(r.ordinal);
}

int clamp_to_int(std::int64_t v) {
  if (v > INT_MAX) return INT_MAX;
  if (v < INT_MIN) return INT_MIN;
  return static_cast<int>(v);
}

/// Shared normalize/validate/repair pass over raw records, in order.
/// Strict mode throws on the first out-of-range index or coverage overlap;
/// repair mode drops and strips per the documented rules, logging everything.
std::pair<std::vector<Bead>, ValidationReport> repair_records(
    const std::vector<RawRecord>& records, std::size_t src_len,
    std::size_t tgt_len, RepairMode mode) {
  std::vector<Bead> beads;
  ValidationReport report;
  // index -> ordinal in `records` of the bead that owns it
  std::map<std::int64_t, std::size_t> src_owner, tgt_owner;

  for (std::size_t ri = 0; ri < records.size(); ++ri) {
    const RawRecord& rec = records[ri];
    const bool asserted_src = !rec.src.empty();
    const bool asserted_tgt = !rec.tgt.empty();
    const std::string label = record_label(rec);

    auto prepare = [&](std::vector<std::int64_t> side, const char* side_name) {
      const std::size_t before = side.size();
      std::sort(side.begin(), side.end());
      side.erase(std::unique(side.begin(), side.end()), side.end());
      if (side.size() != before)
        report.log.push_back(label + ": " + side_name +
                             " indices deduplicated");
      return side;
    };
    std::vector<std::int64_t> src = prepare(rec.src, "src");
    std::vector<std::int64_t> tgt = prepare(rec.tgt, "tgt");

    // A record that maps nothing to nothing asserts nothing; skipping it is
    // normalization, not repair, so it stays out of the audit lists.
    if (src.empty() && tgt.empty()) {
      report.log.push_back(label + ": empty record skipped");
      continue;
    }

    if (mode == RepairMode::Strict) {
      auto check_range = [&](const std::vector<std::int64_t>& side, Side which,
                             std::size_t len) {
        for (std::int64_t idx : side)
          if (idx < 0 || idx >= static_cast<std::int64_t>(len)) {
            Error err(ErrorCode::IndexOutOfRange,
                      label + ": " + (which == Side::Source ? "src" : "tgt") +
                          " index " + std::to_string(idx) + " outside [0, " +
                          std::to_string(len) + ")");
            if (rec.chunk_index >= 0) err.set_chunk_index(rec.chunk_index);
            throw err;
          }
      };
      auto check_coverage = [&](const std::vector<std::int64_t>& side,
                                Side which,
                                const std::map<std::int64_t, std::size_t>& owner) {
        for (std::int64_t idx : side) {
          const auto it = owner.find(idx);
          if (it != owner.end()) {
            Error err(ErrorCode::DuplicateCoverage,
                      label + ": " + (which == Side::Source ? "src" : "tgt") +
                          " index " + std::to_string(idx) +
                          " already covered by " +
                          record_label(records[it->second]));
            if (rec.chunk_index >= 0) err.set_chunk_index(rec.chunk_index);
            throw err;
          }
        }
      };
      check_range(src, Side::Source, src_len);
      check_range(tgt, Side::Target, tgt_len);
      check_coverage(src, Side::Source, src_owner);
      check_coverage(tgt, Side::Target, tgt_owner);
    } else {
      auto drop_out_of_range = [&](std::vector<std::int64_t>& side, Side which,
                                   std::size_t len) {
        std::vector<std::int64_t> kept;
        for (std::int64_t idx : side) {
          if (idx >= 0 && idx < static_cast<std::int64_t>(len)) {
            kept.push_back(idx);
            continue;
          }
          report.out_of_range.push_back({ri, which, clamp_to_int(idx)});
          report.log.push_back(label + ": " +
                               (which == Side::Source ? "src" : "tgt") +
                               " index " + std::to_string(idx) +
                               " outside [0, " + std::to_string(len) +
                               "), dropped");
        }
        side = std::move(kept);
      };
      auto strip_covered = [&](std::vector<std::int64_t>& side, Side which,
                               const std::map<std::int64_t, std::size_t>& owner) {
        std::vector<std::int64_t> kept;
        for (std::int64_t idx : side) {
          const auto it = owner.find(idx);
          if (it == owner.end()) {
            kept.push_back(idx);
            continue;
          }
          report.duplicate_coverage.push_back(
              {which, clamp_to_int(idx), {it->second, ri}});
          report.log.push_back(label + ": " +
                               (which == Side::Source ? "src" : "tgt") +
                               " index " + std::to_string(idx) +
                               " already covered by " +
                               record_label(records[it->second]) +
                               ", stripped");
        }
        side = std::move(kept);
      };
      drop_out_of_range(src, Side::Source, src_len);
      drop_out_of_range(tgt, Side::Target, tgt_len);
      strip_covered(src, Side::Source, src_owner);
      strip_covered(tgt, Side::Target, tgt_owner);

      if ((asserted_src && src.empty()) || (asserted_tgt && tgt.empty()) ||
          (src.empty() && tgt.empty())) {
        report.log.push_back(label + ": dropped (" +
                             std::string(src.empty() && tgt.empty()
                                             ? "no index survived"
                                             : asserted_src && src.empty()
                                                   ? "asserted src side emptied"
                                                   : "asserted tgt side emptied") +
                             ")");
        continue;
      }
    }

    Bead bead;
    for (std::int64_t idx : src) {
      bead.src.push_back(static_cast<int>(idx));
      src_owner.emplace(idx, ri);
    }
    for (std::int64_t idx : tgt) {
      bead.tgt.push_back(static_cast<int>(idx));
      tgt_owner.emplace(idx, ri);
    }
    beads.push_back(std::move(bead));
  }
  return {std::move(beads), std::move(report)};
}

/// Canonicalize, final-validate, and fold the final checks into the audit
/// report. The audit lists describe repairs applied to the response, so
/// is_gold_valid answers "was the response already clean".
std::pair<Ladder, ValidationReport> finish_ladder(std::vector<Bead> beads,
                                                  ValidationReport report,
                                                  std::string pair_id,
                                                  std::size_t src_len,
                                                  std::size_t tgt_len) {
  if (beads.empty())
    throw Error(ErrorCode::EmptyResult, "no alignment bead survived");
  Ladder ladder;
  ladder.pair_id = std::move(pair_id);
  ladder.beads = std::move(beads);
  canonicalize(ladder);

  const ValidationReport final_state =
      validate_ladder(ladder, src_len, tgt_len);
  if (!final_state.out_of_range.empty() ||
      !final_state.duplicate_coverage.empty())
    throw Error(ErrorCode::Internal, "repair left an invalid ladder");
  report.monotonicity_violations = final_state.monotonicity_violations;
  report.is_gold_valid =
      report.out_of_range.empty() && report.duplicate_coverage.empty();
  return {std::move(ladder), std::move(report)};
}

void append_report(ValidationReport& into, ValidationReport&& from) {
  into.out_of_range.insert(into.out_of_range.end(), from.out_of_range.begin(),
                           from.out_of_range.end());
  into.duplicate_coverage.insert(into.duplicate_coverage.end(),
                                 from.duplicate_coverage.begin(),
                                 from.duplicate_coverage.end());
  into.log.insert(into.log.end(),
                  std::make_move_iterator(from.log.begin()),
                  std::make_move_iterator(from.log.end()));
}

}  // namespace

MappingResponse extract_json(std::string_view raw) {
  for (std::size_t start = 0; start < raw.size(); ++start) {
    const char c = raw[start];
    if (c != '{' && c != '[') continue;
    const std::size_t end = balanced_end(raw, start);
    if (end == std::string_view::npos) continue;
    const json j = json::parse(raw.substr(start, end - start), nullptr, false);
    if (j.is_discarded()) continue;
    // First parseable JSON value is the response; schema problems are final.
    return decode_response(j);
  }
  throw Error(ErrorCode::JsonNotFound,
              "no JSON object or array found in the model response");
}

std::pair<Ladder, ValidationReport> mappings_to_beads(
    const MappingResponse& response, std::size_t src_len, std::size_t tgt_len,
    const RepairPolicy& policy) {
  if (src_len == 0 || tgt_len == 0)
    throw Error(ErrorCode::EmptyInput, "document lengths must be positive");

  std::vector<RawRecord> records;
  records.reserve(response.alignments.size());
  for (std::size_t i = 0; i < response.alignments.size(); ++i)
    records.push_back(
        {response.alignments[i].src, response.alignments[i].tgt, -1, i});

  auto [beads, report] = repair_records(records, src_len, tgt_len, policy.mode);
  return finish_ladder(std::move(beads), std::move(report), "", src_len,
                       tgt_len);
}

ChunkPlan plan_chunks(std::size_t src_len, std::size_t tgt_len,
                      std::size_t chunk_size_src, std::size_t tgt_margin) {
  ChunkPlan plan;
  plan.chunk_size_src = chunk_size_src;
  plan.tgt_margin = tgt_margin;
  if (src_len == 0) return plan;
  if (chunk_size_src == 0) {  // whole document
    plan.chunks.push_back({0, src_len, 0, tgt_len});
    return plan;
  }
  for (std::size_t lo = 0; lo < src_len; lo += chunk_size_src) {
    const std::size_t hi = std::min(lo + chunk_size_src, src_len);
    const std::size_t window_lo = lo * tgt_len / src_len;  // floor
    const std::size_t window_hi =
        (hi * tgt_len + src_len - 1) / src_len;  // ceil
    ChunkSpan span;
    span.src_lo = lo;
    span.src_hi = hi;
    span.tgt_lo = window_lo > tgt_margin ? window_lo - tgt_margin : 0;
    span.tgt_hi = std::min(tgt_len, window_hi + tgt_margin);
    plan.chunks.push_back(span);
  }
  return plan;
}

std::pair<Ladder, ValidationReport> align_document(const Document& src,
                                                   const Document& tgt,
                                                   const PromptTemplate& tmpl,
                                                   const LlmConfig& config,
                                                   const AlignOptions& options) {
  if (src.sentences.empty() || tgt.sentences.empty())
    throw Error(ErrorCode::EmptyDocument, "cannot align an empty document");
  check_template(tmpl);
  const std::string pair_id =
      options.pair_id.empty() ? src.doc_id : options.pair_id;

  const ChunkPlan plan = plan_chunks(src.size(), tgt.size(),
                                     options.chunk_size_src, options.tgt_margin);
  const std::size_t n_chunks = plan.chunks.size();

  // Phase 1: fetch raw responses, bounded concurrency, one slot per chunk.
  std::vector<std::string> responses(n_chunks);
  std::vector<std::exception_ptr> failures(n_chunks);
  auto fetch = [&](std::size_t ci) {
    try {
      const ChunkSpan& span = plan.chunks[ci];
      const std::string prompt =
          build_prompt(render_indexed(src, span.src_lo, span.src_hi),
                       render_indexed(tgt, span.tgt_lo, span.tgt_hi), tmpl);
      RequestContext ctx;
      ctx.pair_id = pair_id;
      ctx.chunk_index = static_cast<int>(ci);
      responses[ci] = request_alignment(prompt, config, tmpl.system_text, ctx);
    } catch (...) {
      failures[ci] = std::current_exception();
    }
  };

  const std::size_t workers =
      std::min(std::max<std::size_t>(options.max_concurrency, 1), n_chunks);
  if (workers <= 1) {
    for (std::size_t ci = 0; ci < n_chunks; ++ci) fetch(ci);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t ci = next.fetch_add(1); ci < n_chunks;
             ci = next.fetch_add(1))
          fetch(ci);
      });
    for (std::thread& t : pool) t.join();
  }

  // Deterministic error selection: lowest failing chunk wins.
  auto rethrow_for_chunk = [&](std::size_t ci) {
    try {
      std::rethrow_exception(failures[ci]);
    } catch (const Error& e) {
      std::string msg = e.what();
      if (n_chunks > 1)
        msg = "chunk " + std::to_string(ci + 1) + "/" +
              std::to_string(n_chunks) + ": " + msg;
      Error out(e.code(), msg, e.line_no());
      out.set_chunk_index(static_cast<int>(ci));
      throw out;
    } catch (const std::exception& e) {
      Error out(ErrorCode::Internal,
                "chunk " + std::to_string(ci + 1) + ": " + e.what());
      out.set_chunk_index(static_cast<int>(ci));
      throw out;
    }
  };
  for (std::size_t ci = 0; ci < n_chunks; ++ci)
    if (failures[ci]) rethrow_for_chunk(ci);

  // Phase 2: decode and repair each chunk in order.
  ValidationReport merged;
  std::vector<RawRecord> chunk_beads;  // accepted beads, re-keyed by chunk
  for (std::size_t ci = 0; ci < n_chunks; ++ci) {
    try {
      const MappingResponse response = extract_json(responses[ci]);
      std::vector<RawRecord> records;
      records.reserve(response.alignments.size());
      for (std::size_t i = 0; i < response.alignments.size(); ++i) {
        RawRecord rec;
        rec.src = response.alignments[i].src;
        rec.tgt = response.alignments[i].tgt;
        rec.chunk_index = n_chunks > 1 ? static_cast<int>(ci) : -1;
        rec.ordinal = i;
        records.push_back(std::move(rec));
      }
      auto [beads, report] =
          repair_records(records, src.size(), tgt.size(), options.policy.mode);
      append_report(merged, std::move(report));
      for (std::size_t bi = 0; bi < beads.size(); ++bi) {
        RawRecord rec;
        for (int idx : beads[bi].src) rec.src.push_back(idx);
        for (int idx : beads[bi].tgt) rec.tgt.push_back(idx);
        rec.chunk_index = n_chunks > 1 ? static_cast<int>(ci) : -1;
        rec.ordinal = bi;
        chunk_beads.push_back(std::move(rec));
      }
    } catch (...) {
      failures[ci] = std::current_exception();
      rethrow_for_chunk(ci);
    }
  }

  // Phase 3: cross-chunk coverage merge, earlier chunk wins.
  std::vector<Bead> final_beads;
  if (n_chunks > 1) {
    auto [beads, report] =
        repair_records(chunk_beads, src.size(), tgt.size(), options.policy.mode);
    append_report(merged, std::move(report));
    final_beads = std::move(beads);
  } else {
    for (RawRecord& rec : chunk_beads) {
      Bead bead;
      for (std::int64_t idx : rec.src) bead.src.push_back(static_cast<int>(idx));
      for (std::int64_t idx : rec.tgt) bead.tgt.push_back(static_cast<int>(idx));
      final_beads.push_back(std::move(bead));
    }
  }

  return finish_ladder(std::move(final_beads), std::move(merged), pair_id,
                       src.size(), tgt.size());
}

}  // namespace bitalign
