#include "bitalign/llm_client.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "bitalign/errors.hpp"

namespace bitalign {

namespace {

using nlohmann::json;

std::string context_label(const RequestContext& ctx) {
  std::string label;
  if (!ctx.pair_id.empty()) label = "pair \"" + ctx.pair_id + "\"";
  if (ctx.chunk_index >= 0) {
    if (!label.empty()) label += ' ';
    label += "chunk " + std::to_string(ctx.chunk_index);
  }
  return label.empty() ? label : " (" + label + ")";
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::FileNotReadable, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string mock_request(const LlmConfig& config, const RequestContext& ctx) {
  if (!config.mock_response.empty()) return config.mock_response;
  if (config.mock_dir.empty())
    throw Error(ErrorCode::MockFixtureMissing,
                "mock backend needs mock_response or mock_dir" +
                    context_label(ctx));
  if (ctx.pair_id.empty())
    throw Error(ErrorCode::MockFixtureMissing,
                "mock backend needs a pair id to name its fixture");

  std::vector<std::string> names;
  if (ctx.chunk_index >= 0) {
    const std::string stem =
        ctx.pair_id + ".chunk" + std::to_string(ctx.chunk_index);
    names.insert(names.end(), {stem + ".txt", stem + ".json", stem});
  }
  names.insert(names.end(),
               {ctx.pair_id + ".txt", ctx.pair_id + ".json", ctx.pair_id});

  for (const std::string& name : names) {
    const std::filesystem::path path = config.mock_dir / name;
    std::error_code ec;
    if (std::filesystem::is_regular_file(path, ec)) return slurp(path);
  }
  throw Error(ErrorCode::MockFixtureMissing,
              "no mock fixture for pair \"" + ctx.pair_id + "\" under " +
                  config.mock_dir.string());
}

std::string replay_request(const std::string& prompt, const LlmConfig& config,
                           const std::string& system_text,
                           const RequestContext& ctx) {
  if (config.replay_dir.empty())
    throw Error(ErrorCode::ConfigInvalid, "replay backend needs replay_dir");
  const std::string hash = prompt_hash_hex(system_text, prompt);
  const std::filesystem::path path = config.replay_dir / hash;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    throw Error(ErrorCode::ReplayMiss,
                "no recorded response " + hash + " under " +
                    config.replay_dir.string() + context_label(ctx));
  return slurp(path);
}

void record_response(const LlmConfig& config, const std::string& hash,
                     const std::string& response) {
  std::error_code ec;
  std::filesystem::create_directories(config.replay_dir, ec);
  const std::filesystem::path final_path = config.replay_dir / hash;
  // Unique temp name so concurrent chunk requests never interleave writes.
  std::random_device rd;
  const std::filesystem::path tmp_path =
      final_path.string() + ".tmp" + std::to_string(rd());
  {
    std::ofstream out(tmp_path, std::ios::binary);
    if (!out)
      throw Error(ErrorCode::FileNotWritable,
                  "cannot write replay record " + tmp_path.string());
    out << response;
    if (!out.flush())
      throw Error(ErrorCode::FileNotWritable,
                  "short write on replay record " + tmp_path.string());
  }
  std::filesystem::rename(tmp_path, final_path, ec);
  if (ec)
    throw Error(ErrorCode::FileNotWritable,
                "cannot move replay record into place: " + ec.message());
}

/// Split http(s)://host[:port]/path into client base and request path.
void split_url(const std::string& url, std::string& base, std::string& path) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw Error(ErrorCode::ConfigInvalid,
                "endpoint_url must start with http:// or https://, got \"" +
                    url + "\"");
  const std::size_t path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    base = url;
    path = "/";
  } else {
    base = url.substr(0, path_start);
    path = url.substr(path_start);
  }
}

std::string http_request(const std::string& prompt, const LlmConfig& config,
                         const std::string& system_text,
                         const RequestContext& ctx) {
  if (config.endpoint_url.empty())
    throw Error(ErrorCode::ConfigInvalid, "http_chat backend needs endpoint_url");

  std::string api_key;
  if (!config.api_key_env.empty()) {
    const char* key = std::getenv(config.api_key_env.c_str());
    if (!key || !*key)
      throw Error(ErrorCode::MissingApiKey,
                  "environment variable " + config.api_key_env +
                      " is not set; it must hold the API key");
    api_key = key;
  }

  std::string base, path;
  split_url(config.endpoint_url, base, path);

  json body;
  body["model"] = config.model_name;
  body["messages"] = json::array();
  if (!system_text.empty())
    body["messages"].push_back({{"role", "system"}, {"content", system_text}});
  body["messages"].push_back({{"role", "user"}, {"content", prompt}});
  body["temperature"] = config.temperature;
  const std::string payload = body.dump();

  httplib::Client cli(base);
  cli.set_connection_timeout(config.timeout);
  cli.set_read_timeout(config.timeout);
  cli.set_write_timeout(config.timeout);

  httplib::Headers headers;
  if (!api_key.empty()) {
    if (config.auth_header == "Authorization")
      headers.emplace("Authorization", "Bearer " + api_key);
    else
      headers.emplace(config.auth_header, api_key);
  }

  std::string last_note = "no attempt made";
  auto backoff = config.retry_backoff_base;
  const int attempts = config.max_retries + 1;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    auto res = cli.Post(path, headers, payload, "application/json");
    if (!res) {
      last_note = std::string("transport error: ") + httplib::to_string(res.error());
      continue;  // includes timeouts
    }
    if (res->status == 429 || res->status >= 500) {
      last_note = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300)
      throw Error(ErrorCode::TransportExhausted,
                  "HTTP " + std::to_string(res->status) + " from " +
                      config.endpoint_url + " (not retryable)" +
                      context_label(ctx));

    std::string completion;
    json envelope = json::parse(res->body, nullptr, false);
    if (!envelope.is_discarded() && envelope.contains("choices") &&
        envelope["choices"].is_array() && !envelope["choices"].empty() &&
        envelope["choices"][0].contains("message") &&
        envelope["choices"][0]["message"].contains("content") &&
        envelope["choices"][0]["message"]["content"].is_string()) {
      completion = envelope["choices"][0]["message"]["content"].get<std::string>();
    } else {
      // Not a chat envelope; hand the raw body to JSON extraction downstream.
      completion = res->body;
    }
    if (config.record && !config.replay_dir.empty())
      record_response(config, prompt_hash_hex(system_text, prompt), completion);
    return completion;
  }
  throw Error(ErrorCode::TransportExhausted,
              "giving up on " + config.endpoint_url + " after " +
                  std::to_string(attempts) + " attempt(s), last: " + last_note +
                  context_label(ctx));
}

}  // namespace

const char* backend_kind_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::HttpChat: return "http_chat";
    case BackendKind::Replay: return "replay";
    case BackendKind::Mock: return "mock";
  }
  return "?";
}

BackendKind backend_kind_from_name(std::string_view name) {
  if (name == "http_chat") return BackendKind::HttpChat;
  if (name == "replay") return BackendKind::Replay;
  if (name == "mock") return BackendKind::Mock;
  throw Error(ErrorCode::ConfigInvalid,
              "unknown backend \"" + std::string(name) +
                  "\"; expected http_chat, replay or mock");
}

std::string prompt_hash_hex(std::string_view system_text,
                            std::string_view user_text) {
  // 64-bit FNV-1a over system text, a separator, and user text.
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::string_view text) {
    for (unsigned char c : text) {
      h ^= c;
      h *= 1099511628211ull;
    }
  };
  mix(system_text);
  mix(std::string_view("\x1e", 1));
  mix(user_text);
  char out[17];
  std::snprintf(out, sizeof out, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(out, 16);
}

std::size_t estimate_tokens(std::string_view text) {
  return (text.size() + 3) / 4;  // ~4 bytes per token, rounded up
}

std::string request_alignment(const std::string& prompt,
                              const LlmConfig& config,
                              const std::string& system_text,
                              const RequestContext& ctx) {
  if (config.temperature < 0.0)
    throw Error(ErrorCode::ConfigInvalid, "temperature must be >= 0");
  if (config.max_retries < 0)
    throw Error(ErrorCode::ConfigInvalid, "max_retries must be >= 0");
  if (config.timeout.count() <= 0)
    throw Error(ErrorCode::ConfigInvalid, "timeout must be positive");

  if (config.max_prompt_tokens_estimate > 0) {
    const std::size_t estimate =
        estimate_tokens(system_text) + estimate_tokens(prompt);
    if (estimate > config.max_prompt_tokens_estimate)
      throw Error(ErrorCode::PromptBudgetExceeded,
                  "prompt is about " + std::to_string(estimate) +
                      " tokens, over the budget of " +
                      std::to_string(config.max_prompt_tokens_estimate) +
                      "; chunk the document or raise the budget" +
                      context_label(ctx));
  }

  switch (config.backend) {
    case BackendKind::Mock: return mock_request(config, ctx);
    case BackendKind::Replay:
      return replay_request(prompt, config, system_text, ctx);
    case BackendKind::HttpChat:
      return http_request(prompt, config, system_text, ctx);
  }
  throw Error(ErrorCode::Internal, "unhandled backend kind");
}

}  // namespace bitalign
