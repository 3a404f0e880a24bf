#ifndef BITALIGN_CONFIG_HPP
#define BITALIGN_CONFIG_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "bitalign/gale_church.hpp"
#include "bitalign/llm_align.hpp"
#include "bitalign/llm_client.hpp"

namespace bitalign {

/// Fully resolved settings. Resolution order: built-in defaults, then config
/// file, then BITALIGN_* environment variables, then command-line flags.
struct AppConfig {
  LlmConfig llm;
  std::filesystem::path prompt_file;  // empty = built-in template

  std::size_t chunk_size_src = 0;
  std::size_t tgt_margin = 2;
  RepairMode repair_mode = RepairMode::Repair;

  GaleChurchParams baseline;
  bool baseline_estimate_ratio = false;

  bool eval_include_null = false;
  bool io_allow_blank = false;

  std::size_t run_max_concurrency = 4;
};

/// Parse a JSON config file into defaults. Unknown keys are ConfigInvalid so
/// typos fail loudly. Relative paths resolve against the file's directory.
AppConfig load_app_config(const std::optional<std::filesystem::path>& path);

/// Environment layer. Recognized variables: BITALIGN_LLM_BACKEND,
/// BITALIGN_LLM_ENDPOINT_URL, BITALIGN_LLM_MODEL_NAME, BITALIGN_LLM_API_KEY_ENV,
/// BITALIGN_LLM_TEMPERATURE, BITALIGN_REPLAY_DIR, BITALIGN_MOCK_DIR,
/// BITALIGN_RECORD, BITALIGN_MAX_CONCURRENCY.
void apply_env_overrides(AppConfig& config);

PromptTemplate resolve_prompt_template(const AppConfig& config);

}  // namespace bitalign

#endif
