#include "bitalign/beads.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "bitalign/errors.hpp"

namespace bitalign {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings)
    warnings->push_back(msg);
  else
    std::cerr << "warning: " << msg << "\n";
}

// Parses one side of a bead line: empty, or comma-separated decimal indices.
// No spaces, no signs. Returns false on a grammar violation.
bool parse_side(std::string_view part, std::vector<int>& out) {
  out.clear();
  if (part.empty()) return true;
  long value = 0;
  bool in_number = false;
  for (char ch : part) {
    if (ch >= '0' && ch <= '9') {
      value = value * 10 + (ch - '0');
      if (value > std::numeric_limits<int>::max()) return false;
      in_number = true;
    } else if (ch == ',') {
      if (!in_number) return false;  // empty component
      out.push_back(static_cast<int>(value));
      value = 0;
      in_number = false;
    } else {
      return false;
    }
  }
  if (!in_number) return false;  // trailing comma
  out.push_back(static_cast<int>(value));
  return true;
}

// Sorts and deduplicates in place; true when anything changed.
bool normalize_side(std::vector<int>& side) {
  if (std::is_sorted(side.begin(), side.end()) &&
      std::adjacent_find(side.begin(), side.end()) == side.end())
    return false;
  std::sort(side.begin(), side.end());
  side.erase(std::unique(side.begin(), side.end()), side.end());
  return true;
}

}  // namespace

bool bead_canonical_less(const Bead& a, const Bead& b) {
  const int ka = a.src.empty() ? (a.tgt.empty() ? -1 : a.tgt.front())
                               : a.src.front();
  const int kb = b.src.empty() ? (b.tgt.empty() ? -1 : b.tgt.front())
                               : b.src.front();
  if (ka != kb) return ka < kb;
  if (a.src.empty() != b.src.empty()) return !a.src.empty();
  if (a.src != b.src) return a.src < b.src;
  return a.tgt < b.tgt;
}

void canonicalize(Ladder& ladder) {
  std::stable_sort(ladder.beads.begin(), ladder.beads.end(),
                   bead_canonical_less);
}

Ladder parse_ladder(std::string_view text, std::string pair_id,
                    std::vector<std::string>* warnings) {
  Ladder ladder;
  ladder.pair_id = std::move(pair_id);

  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::size_t end = eol == std::string_view::npos ? text.size() : eol;
    std::string_view line = text.substr(pos, end - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    // Trim ASCII blanks around the whole line only.
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t'))
      line.remove_prefix(1);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);

    if (line.empty() || line.front() == '#') continue;

    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos ||
        line.find(':', colon + 1) != std::string_view::npos)
      throw Error(ErrorCode::SyntaxError,
                  "ladder line " + std::to_string(line_no) +
                      ": expected SRC:TGT, got \"" + std::string(line) + "\"",
                  line_no);

    Bead bead;
    if (!parse_side(line.substr(0, colon), bead.src) ||
        !parse_side(line.substr(colon + 1), bead.tgt))
      throw Error(ErrorCode::SyntaxError,
                  "ladder line " + std::to_string(line_no) +
                      ": malformed index list in \"" + std::string(line) + "\"",
                  line_no);
    if (bead.src.empty() && bead.tgt.empty())
      throw Error(ErrorCode::BothSidesEmpty,
                  "ladder line " + std::to_string(line_no) +
                      ": both sides empty",
                  line_no);

    const bool reordered_src = normalize_side(bead.src);
    const bool reordered_tgt = normalize_side(bead.tgt);
    if (reordered_src || reordered_tgt)
      warn(warnings, "ladder line " + std::to_string(line_no) +
                         ": indices reordered or deduplicated");

    ladder.beads.push_back(std::move(bead));
  }

  canonicalize(ladder);
  return ladder;
}

std::string render_ladder(const Ladder& ladder) {
  Ladder canon = ladder;
  canonicalize(canon);

  std::string out;
  for (const Bead& bead : canon.beads) {
    auto append_side = [&out](const std::vector<int>& side) {
      for (std::size_t i = 0; i < side.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(side[i]);
      }
    };
    append_side(bead.src);
    out += ':';
    append_side(bead.tgt);
    out += '\n';
  }
  return out;
}

ValidationReport validate_ladder(const Ladder& ladder, std::size_t src_len,
                                 std::size_t tgt_len) {
  ValidationReport report;

  auto check_range = [&](std::size_t pos, Side side, const std::vector<int>& v,
                         std::size_t len) {
    for (int idx : v)
      if (idx < 0 || static_cast<std::size_t>(idx) >= len)
        report.out_of_range.push_back({pos, side, idx});
  };
  std::map<std::pair<int, int>, std::vector<std::size_t>> coverage;
  for (std::size_t p = 0; p < ladder.beads.size(); ++p) {
    const Bead& bead = ladder.beads[p];
    check_range(p, Side::Source, bead.src, src_len);
    check_range(p, Side::Target, bead.tgt, tgt_len);
    for (int idx : bead.src) coverage[{0, idx}].push_back(p);
    for (int idx : bead.tgt) coverage[{1, idx}].push_back(p);
  }
  for (auto& [key, positions] : coverage) {
    if (positions.size() > 1)
      report.duplicate_coverage.push_back(
          {key.first == 0 ? Side::Source : Side::Target, key.second,
           positions});
  }

  // Monotonicity over the canonical order, comparing target spans of
  // consecutive target-bearing beads.
  std::vector<const Bead*> canon;
  canon.reserve(ladder.beads.size());
  for (const Bead& b : ladder.beads) canon.push_back(&b);
  std::stable_sort(canon.begin(), canon.end(),
                   [](const Bead* a, const Bead* b) {
                     return bead_canonical_less(*a, *b);
                   });
  const Bead* prev = nullptr;
  for (const Bead* bead : canon) {
    if (bead->tgt.empty()) continue;
    if (prev && bead->tgt.front() < prev->tgt.back())
      ++report.monotonicity_violations;
    prev = bead;
  }

  report.is_gold_valid =
      report.out_of_range.empty() && report.duplicate_coverage.empty();
  return report;
}

Ladder load_ladder(const std::filesystem::path& path, std::string pair_id,
                   std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable,
                "cannot read ladder file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (pair_id.empty()) pair_id = path.stem().string();
  return parse_ladder(buf.str(), std::move(pair_id), warnings);
}

std::string summarize_report(const ValidationReport& report) {
  std::ostringstream out;
  out << (report.is_gold_valid ? "valid" : "INVALID") << "; out-of-range "
      << report.out_of_range.size() << ", duplicate coverage "
      << report.duplicate_coverage.size() << ", monotonicity violations "
      << report.monotonicity_violations;
  if (!report.log.empty()) out << ", repairs " << report.log.size();
  return out.str();
}

}  // namespace bitalign
