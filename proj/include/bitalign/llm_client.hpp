#ifndef BITALIGN_LLM_CLIENT_HPP
#define BITALIGN_LLM_CLIENT_HPP

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace bitalign {

enum class BackendKind { HttpChat, Replay, Mock };

const char* backend_kind_name(BackendKind kind);
BackendKind backend_kind_from_name(std::string_view name);  // ConfigInvalid

struct LlmConfig {
  BackendKind backend = BackendKind::Mock;

  // http_chat
  std::string endpoint_url;  // e.g. http://host:port/v1/chat/completions
  std::string model_name;
  std::string api_key_env = "BITALIGN_API_KEY";
  /// "Authorization" sends "Bearer <key>"; any other header sends the key raw.
  std::string auth_header = "Authorization";
  double temperature = 0.0;
  int max_retries = 3;
  std::chrono::milliseconds retry_backoff_base{1000};  // doubles per attempt
  std::chrono::milliseconds timeout{120000};

  /// Rough prompt budget guard (about 4 chars per token); 0 disables.
  std::size_t max_prompt_tokens_estimate = 100000;

  // replay
  std::filesystem::path replay_dir;
  bool record = false;  // http_chat writes responses through to replay_dir

  // mock
  std::filesystem::path mock_dir;   // fixtures named <pair_id>.txt
  std::string mock_response;        // inline fixture, takes precedence
};

/// Identifies the request for fixture lookup and error messages.
struct RequestContext {
  std::string pair_id;
  int chunk_index = -1;
};

/// Stable 64-bit FNV-1a over system and user text, as 16 lowercase hex
/// digits. Keys the replay store.
std::string prompt_hash_hex(std::string_view system_text,
                            std::string_view user_text);

/// Rough token estimate used by the prompt budget guard.
std::size_t estimate_tokens(std::string_view text);

/// Obtain the raw text completion for a prompt.
///   http_chat: chat-style JSON POST (model, messages, temperature), retrying
///              timeouts, 429 and 5xx with exponential backoff. The assistant
///              message content is returned; if the envelope is not in chat
///              shape the raw body is passed through for downstream
///              extraction to judge.
///   replay:    returns the stored response for this prompt's hash
///              (ReplayMiss when absent).
///   mock:      returns the inline fixture, else <mock_dir>/<pair_id>.txt.
std::string request_alignment(const std::string& prompt, const LlmConfig& config,
                              const std::string& system_text = {},
                              const RequestContext& ctx = {});

}  // namespace bitalign

#endif
