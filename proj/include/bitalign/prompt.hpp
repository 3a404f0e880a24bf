#ifndef BITALIGN_PROMPT_HPP
#define BITALIGN_PROMPT_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace bitalign {

/// The translation-mapping prompt. user_text must contain {SRC_BLOCK},
/// {TGT_BLOCK} and {SCHEMA} exactly once each.
struct PromptTemplate {
  std::string version;
  std::string system_text;
  std::string user_text;
  std::string schema_text;
};

/// The template shipped under assets/, embedded at build time.
const PromptTemplate& default_prompt_template();

/// Load an alternate template from a JSON file with the same fields.
PromptTemplate load_prompt_template(const std::filesystem::path& path);

/// PlaceholderMissing unless every placeholder appears exactly once.
void check_template(const PromptTemplate& tmpl);

/// Substitute the indexed line blocks (joined by LF) and the schema into the
/// user text. Deterministic; validates the template first.
std::string build_prompt(const std::vector<std::string>& src_lines,
                         const std::vector<std::string>& tgt_lines,
                         const PromptTemplate& tmpl);

}  // namespace bitalign

#endif
