#ifndef BITALIGN_BEADS_HPP
#define BITALIGN_BEADS_HPP

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bitalign {

/// One alignment unit: a set of source sentence indices paired with a set of
/// target sentence indices. Each side is strictly ascending; at most one side
/// may be empty (a null bead marks an unaligned sentence).
struct Bead {
  std::vector<int> src;
  std::vector<int> tgt;

  bool operator==(const Bead&) const = default;

  bool src_null() const { return src.empty(); }
  bool tgt_null() const { return tgt.empty(); }
  bool has_null_side() const { return src.empty() || tgt.empty(); }
  bool is_one_to_one() const { return src.size() == 1 && tgt.size() == 1; }
};

/// Canonical bead order: ascending by min source index, with source-null beads
/// keyed by their min target index. Total for arbitrary bead lists.
bool bead_canonical_less(const Bead& a, const Bead& b);

struct Ladder {
  std::string pair_id;
  std::vector<Bead> beads;  // canonical order
};

/// Sort beads into canonical order.
void canonicalize(Ladder& ladder);

enum class Side { Source, Target };

inline char side_letter(Side s) { return s == Side::Source ? 's' : 't'; }

struct ValidationReport {
  struct RangeHit {
    std::size_t bead_pos;
    Side side;
    int index;
  };
  struct CoverageHit {
    Side side;
    int index;
    std::vector<std::size_t> bead_positions;
  };

  std::vector<RangeHit> out_of_range;
  std::vector<CoverageHit> duplicate_coverage;
  /// Adjacent canonical-order bead pairs whose target spans step backwards.
  std::size_t monotonicity_violations = 0;
  bool is_gold_valid = false;
  /// Human-readable audit trail; filled by repair passes.
  std::vector<std::string> log;
};

/// Parse the ladder interchange format. One bead per line as `SRC:TGT`, where
/// each side is a comma-separated list of decimal indices or empty. Blank
/// lines and `#` comments are ignored. Indices are sorted and deduplicated on
/// read; a warning is emitted when that changed anything.
Ladder parse_ladder(std::string_view text, std::string pair_id = "",
                    std::vector<std::string>* warnings = nullptr);

/// Canonical rendering: one bead per line, no spaces, trailing newline.
/// parse_ladder(render_ladder(x)) == x for canonical x.
std::string render_ladder(const Ladder& ladder);

/// Range, coverage, and monotonicity checks. Reports, never throws, never
/// mutates. is_gold_valid requires empty out_of_range and duplicate_coverage;
/// monotonicity is informational (generative hypotheses need not be monotone).
ValidationReport validate_ladder(const Ladder& ladder, std::size_t src_len,
                                 std::size_t tgt_len);

Ladder load_ladder(const std::filesystem::path& path, std::string pair_id = "",
                   std::vector<std::string>* warnings = nullptr);

std::string summarize_report(const ValidationReport& report);

}  // namespace bitalign

#endif
