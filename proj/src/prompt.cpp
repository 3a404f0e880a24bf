#include "bitalign/prompt.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bitalign/default_template.hpp"
#include "bitalign/errors.hpp"

namespace bitalign {

namespace {

using nlohmann::json;

PromptTemplate template_from_json(const json& j, const std::string& where) {
  if (!j.is_object())
    throw Error(ErrorCode::ConfigInvalid, where + ": template must be a JSON object");
  PromptTemplate tmpl;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_string())
      throw Error(ErrorCode::ConfigInvalid,
                  where + ": template field \"" + key + "\" must be a string");
    if (key == "version")
      tmpl.version = value.get<std::string>();
    else if (key == "system_text")
      tmpl.system_text = value.get<std::string>();
    else if (key == "user_text")
      tmpl.user_text = value.get<std::string>();
    else if (key == "schema_text")
      tmpl.schema_text = value.get<std::string>();
    else
      throw Error(ErrorCode::ConfigInvalid,
                  where + ": unknown template key \"" + key + "\"");
  }
  check_template(tmpl);
  return tmpl;
}

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + needle.size()))
    ++n;
  return n;
}

}  // namespace

const PromptTemplate& default_prompt_template() {
  static const PromptTemplate tmpl = template_from_json(
      json::parse(detail::kDefaultTemplateJson), "built-in template");
  return tmpl;
}

PromptTemplate load_prompt_template(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable,
                "cannot read prompt template " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::ConfigInvalid,
                "prompt template " + path.string() + " is not valid JSON");
  return template_from_json(j, path.string());
}

void check_template(const PromptTemplate& tmpl) {
  for (const char* placeholder : {"{SRC_BLOCK}", "{TGT_BLOCK}", "{SCHEMA}"}) {
    const std::size_t n = count_occurrences(tmpl.user_text, placeholder);
    if (n != 1)
      throw Error(ErrorCode::PlaceholderMissing,
                  "template user text must contain " + std::string(placeholder) +
                      " exactly once, found " + std::to_string(n) +
                      " occurrence(s)");
  }
}

std::string build_prompt(const std::vector<std::string>& src_lines,
                         const std::vector<std::string>& tgt_lines,
                         const PromptTemplate& tmpl) {
  if (src_lines.empty() || tgt_lines.empty())
    throw Error(ErrorCode::EmptyInput,
                "cannot build a prompt over an empty line list");
  check_template(tmpl);

  auto join = [](const std::vector<std::string>& lines) {
    std::string block;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (i) block += '\n';
      block += lines[i];
    }
    return block;
  };
  const std::string src_block = join(src_lines);
  const std::string tgt_block = join(tgt_lines);

  // Substitute by template position so block contents can never be mistaken
  // for a later placeholder.
  struct Slot {
    std::size_t pos;
    std::size_t len;
    const std::string* value;
  };
  std::array<Slot, 3> slots = {{
      {tmpl.user_text.find("{SRC_BLOCK}"), 11, &src_block},
      {tmpl.user_text.find("{TGT_BLOCK}"), 11, &tgt_block},
      {tmpl.user_text.find("{SCHEMA}"), 8, &tmpl.schema_text},
  }};
  std::sort(slots.begin(), slots.end(),
            [](const Slot& a, const Slot& b) { return a.pos < b.pos; });

  std::string out;
  std::size_t cursor = 0;
  for (const Slot& slot : slots) {
    out.append(tmpl.user_text, cursor, slot.pos - cursor);
    out.append(*slot.value);
    cursor = slot.pos + slot.len;
  }
  out.append(tmpl.user_text, cursor, std::string::npos);
  return out;
}

}  // namespace bitalign
