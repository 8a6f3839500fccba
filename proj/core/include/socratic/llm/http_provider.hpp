#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>

#include "socratic/llm/provider.hpp"

namespace socratic::llm {

/// Connection settings for an OpenAI-compatible chat-completions endpoint.
/// The API key itself is never stored; `api_key_ref` names the environment
/// variable that holds it.
struct ProviderConfig {
    std::string base_url = "https://api.openai.com/v1";
    std::string api_key_ref = "OPENAI_API_KEY";
    std::string model = "gpt-4";
    int timeout_ms = 60000;
    int max_retries = 2;
    int backoff_base_ms = 500;

    /// timeout_ms > 0, 0 <= max_retries <= 3. Throws Error(InvalidArgument).
    void validate() const;

    /// Reads a JSON config file with keys base_url, api_key_ref, model,
    /// timeout_ms, max_retries. Unspecified keys keep their defaults.
    static ProviderConfig from_file(const std::filesystem::path& path);
};

/// POSTs to `<base_url>/chat/completions`. Retries transport errors, 429 and
/// 5xx with exponential backoff (base backoff_base_ms, factor 2).
class HttpProvider final : public Provider {
public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    /// Reads the key from the environment. A missing key surfaces as
    /// Error(AuthFailed) on the first complete(), before any network traffic.
    explicit HttpProvider(ProviderConfig config);
    HttpProvider(ProviderConfig config, std::string api_key, Sleeper sleeper = {});

    ChatResponse complete(const ChatRequest& request) override;

    const ProviderConfig& config() const noexcept { return config_; }

private:
    ProviderConfig config_;
    std::string api_key_;
    Sleeper sleeper_;
};

}  // namespace socratic::llm
