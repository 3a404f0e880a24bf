#ifndef BITALIGN_CORPUS_HPP
#define BITALIGN_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bitalign/beads.hpp"

namespace bitalign {

struct Sentence {
  std::size_t index = 0;  // 0-based position in the document
  std::string text;       // non-empty, trimmed, no line terminators
};

struct Document {
  std::string doc_id;
  std::string language;  // role label, e.g. "src" or "tgt"
  std::vector<Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
};

/// Build a document from already-split lines. Lines are trimmed of Unicode
/// whitespace. A blank line raises BlankLine unless allow_blank is set, in
/// which case it is skipped with a warning and consumes no index.
Document document_from_lines(const std::vector<std::string>& lines,
                             std::string doc_id = "", std::string language = "",
                             bool allow_blank = false,
                             std::vector<std::string>* warnings = nullptr);

/// Load a one-sentence-per-line UTF-8 text file. LF and CRLF both accepted;
/// terminators never become part of sentence text. A leading BOM is dropped.
Document load_document(const std::filesystem::path& path,
                       bool allow_blank = false, std::string doc_id = "",
                       std::string language = "",
                       std::vector<std::string>* warnings = nullptr);

/// One string per sentence, "<index>\t<text>", in index order.
std::vector<std::string> render_indexed(const Document& doc);

/// Same, restricted to indices [lo, hi). Indices stay global.
std::vector<std::string> render_indexed(const Document& doc, std::size_t lo,
                                        std::size_t hi);

struct CorpusStats {
  std::size_t src_sentences = 0;
  std::size_t tgt_sentences = 0;
  std::size_t src_tokens = 0;  // unicode-whitespace split
  std::size_t tgt_tokens = 0;
  double sent_ratio_pct = 0.0;  // 100 * src_sentences / tgt_sentences, unrounded
  std::optional<double> one_to_one_pct;  // only when a gold ladder was given
};

/// Token counts use Unicode-whitespace splitting, which is deliberately not
/// a linguistic tokenizer; output labels it so the numbers are not mistaken
/// for tokenizer-specific counts. When gold is given it is validated against
/// the document lengths first (LadderInvalid on failure).
CorpusStats corpus_stats(const Document& src, const Document& tgt,
                         const Ladder* gold = nullptr);

}  // namespace bitalign

#endif
