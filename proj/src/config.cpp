#include "bitalign/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bitalign/errors.hpp"

namespace bitalign {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, what);
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) bad("config key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

bool as_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) bad("config key \"" + key + "\" must be true or false");
  return v.get<bool>();
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) bad("config key \"" + key + "\" must be a number");
  return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer())
    bad("config key \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::size_t as_count(const json& v, const std::string& key) {
  const std::int64_t n = as_integer(v, key);
  if (n < 0) bad("config key \"" + key + "\" must not be negative");
  return static_cast<std::size_t>(n);
}

std::filesystem::path resolve_path(const std::filesystem::path& base,
                                   const std::string& value) {
  const std::filesystem::path p = value;
  return p.is_absolute() || base.empty() ? p : base / p;
}

void parse_llm(const json& j, LlmConfig& llm,
               const std::filesystem::path& base) {
  if (!j.is_object()) bad("config key \"llm\" must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "llm." + key;
    if (key == "backend")
      llm.backend = backend_kind_from_name(as_string(value, where));
    else if (key == "endpoint_url")
      llm.endpoint_url = as_string(value, where);
    else if (key == "model_name")
      llm.model_name = as_string(value, where);
    else if (key == "api_key_env")
      llm.api_key_env = as_string(value, where);
    else if (key == "auth_header")
      llm.auth_header = as_string(value, where);
    else if (key == "temperature")
      llm.temperature = as_number(value, where);
    else if (key == "max_retries")
      llm.max_retries = static_cast<int>(as_count(value, where));
    else if (key == "retry_backoff_ms")
      llm.retry_backoff_base =
          std::chrono::milliseconds(as_count(value, where));
    else if (key == "timeout_ms")
      llm.timeout = std::chrono::milliseconds(as_count(value, where));
    else if (key == "max_prompt_tokens_estimate")
      llm.max_prompt_tokens_estimate = as_count(value, where);
    else if (key == "replay_dir")
      llm.replay_dir = resolve_path(base, as_string(value, where));
    else if (key == "record")
      llm.record = as_bool(value, where);
    else if (key == "mock_dir")
      llm.mock_dir = resolve_path(base, as_string(value, where));
    else if (key == "mock_response")
      llm.mock_response = as_string(value, where);
    else
      bad("unknown config key \"" + where + "\"");
  }
  if (llm.temperature < 0) bad("llm.temperature must be >= 0");
  if (llm.timeout.count() <= 0) bad("llm.timeout_ms must be positive");
}

void parse_baseline(const json& j, GaleChurchParams& params) {
  if (!j.is_object()) bad("config key \"baseline\" must be an object");
  for (const auto& [key, value] : j.items()) {
    const std::string where = "baseline." + key;
    if (key == "c") {
      params.c = as_number(value, where);
    } else if (key == "s2") {
      params.s2 = as_number(value, where);
    } else if (key == "priors") {
      if (!value.is_object())
        bad("baseline.priors must be an object keyed by bead kind");
      for (const auto& [kind, prior] : value.items()) {
        bool known = false;
        for (BeadKind bk : kBeadKinds)
          if (kind == bead_kind_name(bk)) {
            params.priors[static_cast<std::size_t>(bk)] =
                as_number(prior, where + "." + kind);
            known = true;
          }
        if (!known) bad("unknown bead kind \"" + kind + "\" in baseline.priors");
      }
    } else {
      bad("unknown config key \"" + where + "\"");
    }
  }
  if (params.c <= 0) bad("baseline.c must be positive");
  if (params.s2 <= 0) bad("baseline.s2 must be positive");
  double sum = 0;
  for (double p : params.priors) {
    if (p <= 0) bad("baseline.priors entries must be positive");
    sum += p;
  }
  if (sum > 1.0 + 1e-12) bad("baseline.priors must sum to at most 1");
}

const char* env(const char* name) { return std::getenv(name); }

double env_double(const char* name, const char* value) {
  char* end = nullptr;
  const double parsed = std::strtod(value, &end);
  if (end == value || *end != '\0')
    bad(std::string(name) + " must be a number, got \"" + value + "\"");
  return parsed;
}

std::size_t env_count(const char* name, const char* value) {
  char* end = nullptr;
  const long long parsed = std::strtoll(value, &end, 10);
  if (end == value || *end != '\0' || parsed < 0)
    bad(std::string(name) + " must be a non-negative integer, got \"" + value +
        "\"");
  return static_cast<std::size_t>(parsed);
}

bool env_bool(const char* name, const char* value) {
  const std::string v = value;
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  bad(std::string(name) + " must be a boolean, got \"" + v + "\"");
}

}  // namespace

AppConfig load_app_config(const std::optional<std::filesystem::path>& path) {
  AppConfig config;
  if (!path) return config;

  std::ifstream in(*path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable,
                "cannot read config file " + path->string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const json j = json::parse(buf.str(), nullptr, false);
  if (j.is_discarded())
    bad("config file " + path->string() + " is not valid JSON");
  if (!j.is_object()) bad("config file must hold a JSON object");

  const std::filesystem::path base = path->parent_path();
  for (const auto& [key, value] : j.items()) {
    if (key == "llm")
      parse_llm(value, config.llm, base);
    else if (key == "prompt_file")
      config.prompt_file = resolve_path(base, as_string(value, key));
    else if (key == "chunk_size_src")
      config.chunk_size_src = as_count(value, key);
    else if (key == "tgt_margin")
      config.tgt_margin = as_count(value, key);
    else if (key == "repair_mode") {
      const std::string mode = as_string(value, key);
      if (mode == "strict")
        config.repair_mode = RepairMode::Strict;
      else if (mode == "repair")
        config.repair_mode = RepairMode::Repair;
      else
        bad("repair_mode must be \"strict\" or \"repair\", got \"" + mode +
            "\"");
    } else if (key == "baseline")
      parse_baseline(value, config.baseline);
    else if (key == "baseline_estimate_ratio")
      config.baseline_estimate_ratio = as_bool(value, key);
    else if (key == "eval_include_null")
      config.eval_include_null = as_bool(value, key);
    else if (key == "io_allow_blank")
      config.io_allow_blank = as_bool(value, key);
    else if (key == "max_concurrency")
      config.run_max_concurrency = as_count(value, key);
    else
      bad("unknown config key \"" + key + "\"");
  }
  return config;
}

void apply_env_overrides(AppConfig& config) {
  if (const char* v = env("BITALIGN_LLM_BACKEND"))
    config.llm.backend = backend_kind_from_name(v);
  if (const char* v = env("BITALIGN_LLM_ENDPOINT_URL"))
    config.llm.endpoint_url = v;
  if (const char* v = env("BITALIGN_LLM_MODEL_NAME")) config.llm.model_name = v;
  if (const char* v = env("BITALIGN_LLM_API_KEY_ENV"))
    config.llm.api_key_env = v;
  if (const char* v = env("BITALIGN_LLM_TEMPERATURE"))
    config.llm.temperature = env_double("BITALIGN_LLM_TEMPERATURE", v);
  if (const char* v = env("BITALIGN_REPLAY_DIR")) config.llm.replay_dir = v;
  if (const char* v = env("BITALIGN_MOCK_DIR")) config.llm.mock_dir = v;
  if (const char* v = env("BITALIGN_RECORD"))
    config.llm.record = env_bool("BITALIGN_RECORD", v);
  if (const char* v = env("BITALIGN_MAX_CONCURRENCY"))
    config.run_max_concurrency = env_count("BITALIGN_MAX_CONCURRENCY", v);
}

PromptTemplate resolve_prompt_template(const AppConfig& config) {
  if (config.prompt_file.empty()) return default_prompt_template();
  return load_prompt_template(config.prompt_file);
}

}  // namespace bitalign
