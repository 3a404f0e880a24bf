#include "bitalign/gale_church.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "bitalign/errors.hpp"
#include "bitalign/utf8.hpp"

namespace bitalign {

const char* bead_kind_name(BeadKind kind) {
  switch (kind) {
    case BeadKind::OneOne: return "1-1";
    case BeadKind::OneTwo: return "1-2";
    case BeadKind::TwoOne: return "2-1";
    case BeadKind::TwoTwo: return "2-2";
    case BeadKind::OneZero: return "1-0";
    case BeadKind::ZeroOne: return "0-1";
  }
  return "?";
}

std::pair<std::size_t, std::size_t> bead_kind_arity(BeadKind kind) {
  switch (kind) {
    case BeadKind::OneOne: return {1, 1};
    case BeadKind::OneTwo: return {1, 2};
    case BeadKind::TwoOne: return {2, 1};
    case BeadKind::TwoTwo: return {2, 2};
    case BeadKind::OneZero: return {1, 0};
    case BeadKind::ZeroOne: return {0, 1};
  }
  return {0, 0};
}

double normal_up_tail(double x) {
  // Abramowitz-Stegun 26.2.17; |error| < 7.5e-8. Tail form keeps the result
  // positive far out where 1 - cdf would cancel.
  constexpr double p = 0.2316419;
  constexpr double b1 = 0.319381530;
  constexpr double b2 = -0.356563782;
  constexpr double b3 = 1.781477937;
  constexpr double b4 = -1.821255978;
  constexpr double b5 = 1.330274429;
  constexpr double inv_sqrt_2pi = 0.3989422804014327;
  const double t = 1.0 / (1.0 + p * x);
  const double poly = ((((b5 * t + b4) * t + b3) * t + b2) * t + b1) * t;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x) * poly;
}

double normal_cdf(double x) {
  return x < 0.0 ? normal_up_tail(-x) : 1.0 - normal_up_tail(x);
}

double length_delta(double l1, double l2, const GaleChurchParams& params) {
  constexpr double eps = 1e-9;
  return (l2 - l1 * params.c) / std::sqrt((l1 + eps) * params.s2);
}

double match_cost(double l1, double l2, BeadKind kind,
                  const GaleChurchParams& params) {
  const double delta = std::fabs(length_delta(l1, l2, params));
  double prob = 2.0 * normal_up_tail(delta);
  prob = std::min(prob, 1.0);
  prob = std::max(prob, 1e-300);
  return -std::log(params.prior(kind)) - std::log(prob);
}

std::vector<double> sentence_char_lengths(const Document& doc) {
  std::vector<double> lengths;
  lengths.reserve(doc.size());
  for (const Sentence& s : doc.sentences)
    lengths.push_back(static_cast<double>(utf8::count_codepoints(s.text)));
  return lengths;
}

double estimate_length_ratio(const Document& src, const Document& tgt) {
  const auto src_lens = sentence_char_lengths(src);
  const auto tgt_lens = sentence_char_lengths(tgt);
  const double src_total =
      std::accumulate(src_lens.begin(), src_lens.end(), 0.0);
  const double tgt_total =
      std::accumulate(tgt_lens.begin(), tgt_lens.end(), 0.0);
  if (src_total <= 0.0)
    throw Error(ErrorCode::EmptyDocument,
                "cannot estimate length ratio from an empty source");
  return tgt_total / src_total;
}

namespace {

struct Cell {
  double cost = 0.0;
  int back = -1;  // BeadKind index, -1 at the origin
};

}  // namespace

Ladder gale_church_align(const Document& src, const Document& tgt,
                         const GaleChurchParams& params) {
  if (src.sentences.empty() || tgt.sentences.empty())
    throw Error(ErrorCode::EmptyDocument, "cannot align an empty document");
  const std::size_t m = src.size();
  const std::size_t n = tgt.size();
  const auto src_lens = sentence_char_lengths(src);
  const auto tgt_lens = sentence_char_lengths(tgt);

  const std::size_t width = n + 1;
  std::vector<Cell> table((m + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> Cell& {
    return table[i * width + j];
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == 0 && j == 0) continue;
      Cell& cell = at(i, j);
      cell.cost = kInf;
      for (BeadKind kind : kBeadKinds) {
        const auto [di, dj] = bead_kind_arity(kind);
        if (i < di || j < dj) continue;
        double l1 = 0.0, l2 = 0.0;
        for (std::size_t k = 0; k < di; ++k) l1 += src_lens[i - 1 - k];
        for (std::size_t k = 0; k < dj; ++k) l2 += tgt_lens[j - 1 - k];
        const double cost =
            at(i - di, j - dj).cost + match_cost(l1, l2, kind, params);
        // Strict improvement only: kBeadKinds is in preference order, so
        // the first kind reaching a cost wins ties.
        if (cost < cell.cost) {
          cell.cost = cost;
          cell.back = static_cast<int>(kind);
        }
      }
    }

  Ladder ladder;
  ladder.pair_id = src.doc_id;
  std::size_t i = m, j = n;
  while (i > 0 || j > 0) {
    const BeadKind kind = static_cast<BeadKind>(at(i, j).back);
    const auto [di, dj] = bead_kind_arity(kind);
    Bead bead;
    for (std::size_t k = di; k > 0; --k)
      bead.src.push_back(static_cast<int>(i - k));
    for (std::size_t k = dj; k > 0; --k)
      bead.tgt.push_back(static_cast<int>(j - k));
    ladder.beads.push_back(std::move(bead));
    i -= di;
    j -= dj;
  }
  std::reverse(ladder.beads.begin(), ladder.beads.end());
  canonicalize(ladder);
  return ladder;
}

double ladder_cost(const Ladder& ladder, const Document& src,
                   const Document& tgt, const GaleChurchParams& params) {
  const auto src_lens = sentence_char_lengths(src);
  const auto tgt_lens = sentence_char_lengths(tgt);
  double total = 0.0;
  for (const Bead& bead : ladder.beads) {
    BeadKind kind;
    if (bead.src.size() == 1 && bead.tgt.size() == 1)
      kind = BeadKind::OneOne;
    else if (bead.src.size() == 1 && bead.tgt.size() == 2)
      kind = BeadKind::OneTwo;
    else if (bead.src.size() == 2 && bead.tgt.size() == 1)
      kind = BeadKind::TwoOne;
    else if (bead.src.size() == 2 && bead.tgt.size() == 2)
      kind = BeadKind::TwoTwo;
    else if (bead.src.size() == 1 && bead.tgt.empty())
      kind = BeadKind::OneZero;
    else if (bead.src.empty() && bead.tgt.size() == 1)
      kind = BeadKind::ZeroOne;
    else
      throw Error(ErrorCode::Internal,
                  "ladder_cost: bead shape outside the length-based model");
    double l1 = 0.0, l2 = 0.0;
    for (int idx : bead.src) l1 += src_lens[static_cast<std::size_t>(idx)];
    for (int idx : bead.tgt) l2 += tgt_lens[static_cast<std::size_t>(idx)];
    total += match_cost(l1, l2, kind, params);
  }
  return total;
}

}  // namespace bitalign
