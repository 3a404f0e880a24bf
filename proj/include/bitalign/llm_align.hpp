#ifndef BITALIGN_LLM_ALIGN_HPP
#define BITALIGN_LLM_ALIGN_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitalign/beads.hpp"
#include "bitalign/corpus.hpp"
#include "bitalign/llm_client.hpp"
#include "bitalign/prompt.hpp"

namespace bitalign {

/// One raw model mapping record, before any validation.
struct MappingRecord {
  std::vector<std::int64_t> src;
  std::vector<std::int64_t> tgt;
};

struct MappingResponse {
  std::vector<MappingRecord> alignments;
};

enum class RepairMode { Strict, Repair };

struct RepairPolicy {
  RepairMode mode = RepairMode::Repair;
};

/// Find the first balanced JSON object or array in raw model output,
/// tolerating Markdown fences and surrounding prose, and decode it.
/// JsonNotFound when nothing parses; SchemaInvalid when it parses but is not
/// an {"alignments": [{"src": [...], "tgt": [...]}]} shape (a bare array is
/// accepted as the alignments list).
MappingResponse extract_json(std::string_view raw);

/// Turn mapping records into a validated canonical ladder.
///
/// Both modes sort and deduplicate each side. Strict mode throws on the first
/// out-of-range index (IndexOutOfRange) or coverage overlap
/// (DuplicateCoverage). Repair mode instead, per record in response order:
///   1. drops out-of-range indices (logged in out_of_range),
///   2. strips indices already covered by an earlier kept record (logged in
///      duplicate_coverage, keeper first),
///   3. drops the record when a side the model asserted ends up empty, or
///      when both sides are empty; a side the model itself left empty stays a
///      null bead.
/// EmptyResult if no bead survives. The returned report carries the full
/// audit trail; the ladder always validates clean.
std::pair<Ladder, ValidationReport> mappings_to_beads(
    const MappingResponse& response, std::size_t src_len, std::size_t tgt_len,
    const RepairPolicy& policy = {});

struct ChunkSpan {
  std::size_t src_lo, src_hi;  // [lo, hi)
  std::size_t tgt_lo, tgt_hi;
};

struct ChunkPlan {
  std::size_t chunk_size_src = 0;
  std::size_t tgt_margin = 0;
  std::vector<ChunkSpan> chunks;
};

/// Split source indices into chunks of chunk_size_src (0 = one whole-document
/// chunk) and give each the proportional target window widened by tgt_margin,
/// clipped to bounds.
ChunkPlan plan_chunks(std::size_t src_len, std::size_t tgt_len,
                      std::size_t chunk_size_src, std::size_t tgt_margin);

struct AlignOptions {
  RepairPolicy policy;
  std::size_t chunk_size_src = 0;  // 0 = whole document
  std::size_t tgt_margin = 2;
  std::size_t max_concurrency = 4;  // bound on in-flight chunk requests
  std::string pair_id;              // defaults to src.doc_id
};

/// The three-step pipeline: indexed rendering (global indices, also inside
/// chunks), prompt building, backend request, JSON extraction, and ladder
/// building. Chunk results are concatenated in chunk order and re-repaired
/// for cross-chunk coverage conflicts (earlier chunk wins). Deterministic for
/// mock and replay backends. Errors from a chunk carry its index.
std::pair<Ladder, ValidationReport> align_document(
    const Document& src, const Document& tgt, const PromptTemplate& tmpl,
    const LlmConfig& config, const AlignOptions& options = {});

}  // namespace bitalign

#endif
