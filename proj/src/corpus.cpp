#include "bitalign/corpus.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "bitalign/errors.hpp"
#include "bitalign/utf8.hpp"

namespace bitalign {

namespace {

void warn(std::vector<std::string>* warnings, const std::string& msg) {
  if (warnings)
    warnings->push_back(msg);
  else
    std::cerr << "warning: " << msg << "\n";
}

}  // namespace

Document document_from_lines(const std::vector<std::string>& lines,
                             std::string doc_id, std::string language,
                             bool allow_blank,
                             std::vector<std::string>* warnings) {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.language = std::move(language);

  int line_no = 0;
  for (const std::string& raw : lines) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string_view trimmed = utf8::trim(line);
    if (trimmed.empty()) {
      if (!allow_blank)
        throw Error(ErrorCode::BlankLine,
                    doc.doc_id + ": blank line " + std::to_string(line_no),
                    line_no);
      warn(warnings, doc.doc_id + ": skipping blank line " +
                         std::to_string(line_no));
      continue;
    }
    doc.sentences.push_back(
        {doc.sentences.size(), std::string(trimmed)});
  }

  if (doc.sentences.empty())
    throw Error(ErrorCode::EmptyDocument,
                doc.doc_id + ": no sentences after loading");
  return doc;
}

Document load_document(const std::filesystem::path& path, bool allow_blank,
                       std::string doc_id, std::string language,
                       std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable,
                "cannot read document: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string content = buf.str();

  std::size_t bad = 0;
  if (!utf8::validate(content, &bad))
    throw Error(ErrorCode::NotUtf8, path.string() +
                                        ": invalid UTF-8 at byte offset " +
                                        std::to_string(bad));
  if (content.rfind("\xEF\xBB\xBF", 0) == 0) content.erase(0, 3);

  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t eol = content.find('\n', pos);
    if (eol == std::string::npos) eol = content.size();
    lines.emplace_back(content, pos, eol - pos);
    pos = eol + 1;
  }

  if (doc_id.empty()) doc_id = path.stem().string();
  return document_from_lines(lines, std::move(doc_id), std::move(language),
                             allow_blank, warnings);
}

std::vector<std::string> render_indexed(const Document& doc, std::size_t lo,
                                        std::size_t hi) {
  std::vector<std::string> out;
  out.reserve(hi - lo);
  for (std::size_t i = lo; i < hi && i < doc.sentences.size(); ++i) {
    const Sentence& s = doc.sentences[i];
    out.push_back(std::to_string(s.index) + "\t" + s.text);
  }
  return out;
}

std::vector<std::string> render_indexed(const Document& doc) {
  return render_indexed(doc, 0, doc.sentences.size());
}

CorpusStats corpus_stats(const Document& src, const Document& tgt,
                         const Ladder* gold) {
  CorpusStats stats;
  stats.src_sentences = src.size();
  stats.tgt_sentences = tgt.size();
  for (const Sentence& s : src.sentences)
    stats.src_tokens += utf8::count_tokens(s.text);
  for (const Sentence& s : tgt.sentences)
    stats.tgt_tokens += utf8::count_tokens(s.text);
  stats.sent_ratio_pct = 100.0 * static_cast<double>(stats.src_sentences) /
                         static_cast<double>(stats.tgt_sentences);

  if (gold) {
    const ValidationReport report =
        validate_ladder(*gold, src.size(), tgt.size());
    if (!report.is_gold_valid)
      throw Error(ErrorCode::LadderInvalid,
                  "gold ladder for " + src.doc_id + "/" + tgt.doc_id +
                      " does not validate: " + summarize_report(report));
    std::size_t one_to_one = 0;
    for (const Bead& bead : gold->beads)
      if (bead.is_one_to_one()) ++one_to_one;
    stats.one_to_one_pct =
        gold->beads.empty()
            ? 0.0
            : 100.0 * static_cast<double>(one_to_one) /
                  static_cast<double>(gold->beads.size());
  }
  return stats;
}

}  // namespace bitalign
