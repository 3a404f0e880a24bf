#ifndef BITALIGN_EVAL_HPP
#define BITALIGN_EVAL_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "bitalign/beads.hpp"

namespace bitalign {

struct StrictCounts {
  std::size_t tp = 0;   // hypothesis beads exactly equal to a reference bead
  std::size_t hyp = 0;  // hypothesis beads considered
  std::size_t ref = 0;  // reference beads considered
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Strict true positives: a hypothesis bead counts only if both index sets
/// are identical to a reference bead. With include_null off, beads with an
/// empty side are excluded from every count.
StrictCounts strict_compare(const Ladder& hyp, const Ladder& ref,
                            bool include_null = false);

/// strict_compare after validating both ladders against the document shape;
/// throws ShapeMismatch when either references an out-of-range index.
StrictCounts strict_compare_checked(const Ladder& hyp, const Ladder& ref,
                                    std::size_t src_len, std::size_t tgt_len,
                                    bool include_null = false);

/// P = tp/hyp, R = tp/ref (0 on empty denominators), F1 harmonic.
Metrics prf(const StrictCounts& counts);

/// Micro average: sums counts across documents, then prf. EmptyInput on an
/// empty list.
Metrics micro_average(const std::vector<StrictCounts>& per_doc);

struct PairEval {
  StrictCounts counts;
  Metrics metrics;
};

struct EvalReport {
  std::string method_name;
  std::map<std::string, PairEval> per_doc;  // keyed by pair_id
  StrictCounts total;
  Metrics overall;  // micro-averaged
};

/// Evaluate one hypothesis set against gold. Every gold pair_id must be
/// present in hyp (MissingPair otherwise); extra hypothesis pairs are
/// ignored with a warning.
EvalReport evaluate_set(const std::string& method_name,
                        const std::map<std::string, Ladder>& gold,
                        const std::map<std::string, Ladder>& hyp,
                        bool include_null = false,
                        std::vector<std::string>* warnings = nullptr);

struct CompareReport {
  std::vector<std::string> pair_ids;  // sorted
  std::vector<EvalReport> methods;    // caller-given order
};

CompareReport compare_report(
    const std::map<std::string, Ladder>& gold,
    const std::vector<std::pair<std::string, std::map<std::string, Ladder>>>&
        methods,
    bool include_null = false, std::vector<std::string>* warnings = nullptr);

/// Plain-text comparison table: one row per (pair, metric), one column per
/// method, row maxima marked with '*'. Values half-up rounded to 3 decimals.
std::string format_compare_table(const CompareReport& report);

/// Machine-readable report with raw counts kept alongside the metrics so
/// overall scores can be recomputed.
std::string eval_report_json(const EvalReport& report);
std::string compare_report_json(const CompareReport& report);

}  // namespace bitalign

#endif
