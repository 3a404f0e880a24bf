#ifndef BITALIGN_GALE_CHURCH_HPP
#define BITALIGN_GALE_CHURCH_HPP

#include <array>
#include <cstddef>
#include <string>

#include "bitalign/beads.hpp"
#include "bitalign/corpus.hpp"

namespace bitalign {

/// The six bead shapes the length-based aligner considers, in tie-break
/// preference order.
enum class BeadKind { OneOne = 0, OneTwo, TwoOne, TwoTwo, OneZero, ZeroOne };

inline constexpr std::array<BeadKind, 6> kBeadKinds = {
    BeadKind::OneOne, BeadKind::OneTwo, BeadKind::TwoOne,
    BeadKind::TwoTwo, BeadKind::OneZero, BeadKind::ZeroOne};

const char* bead_kind_name(BeadKind kind);  // "1-1", "1-2", ...

/// src/tgt sentence counts consumed by each kind.
std::pair<std::size_t, std::size_t> bead_kind_arity(BeadKind kind);

struct GaleChurchParams {
  /// Mean target chars per source char.
  double c = 1.0;
  /// Per-source-character variance of the target length.
  double s2 = 6.8;
  /// Bead-type priors, indexed by BeadKind. The classical category masses
  /// (0.89 for 1-1, 0.0099 for insert-or-delete, 0.089 for contract-or-expand,
  /// 0.011 for 2-2) with each two-way category split evenly, so the defaults
  /// sum to 0.9999.
  std::array<double, 6> priors = {0.89, 0.0445, 0.0445, 0.011, 0.00495,
                                  0.00495};

  double prior(BeadKind kind) const {
    return priors[static_cast<std::size_t>(kind)];
  }
};

/// Standard normal CDF via the Abramowitz-Stegun 26.2.17 rational
/// approximation, absolute error below 7.5e-8.
double normal_cdf(double x);

/// P(Z > x) for x >= 0, computed in tail form so it stays positive.
double normal_up_tail(double x);

/// Length mismatch statistic: (l2 - l1*c) / sqrt((l1 + eps) * s2), with a
/// tiny eps so null source beads stay finite.
double length_delta(double l1, double l2, const GaleChurchParams& params);

/// Negative log probability of a bead: -log prior - log max(2*(1-Phi(|d|)),
/// 1e-300), clamped so probabilities never exceed 1.
double match_cost(double l1, double l2, BeadKind kind,
                  const GaleChurchParams& params);

/// Character (codepoint) lengths of the document's sentences.
std::vector<double> sentence_char_lengths(const Document& doc);

/// c estimated as total target chars over total source chars.
double estimate_length_ratio(const Document& src, const Document& tgt);

/// Minimum-cost monotone bead sequence by dynamic programming over prefix
/// pairs. Covers every index on both sides exactly once. Ties prefer, in
/// order, 1-1, 1-2, 2-1, 2-2, 1-0, 0-1, so output is fully deterministic.
Ladder gale_church_align(const Document& src, const Document& tgt,
                         const GaleChurchParams& params = {});

/// Total match_cost of a ladder produced by the aligner (beads evaluated on
/// the same character lengths the DP used).
double ladder_cost(const Ladder& ladder, const Document& src,
                   const Document& tgt, const GaleChurchParams& params);

}  // namespace bitalign

#endif
