#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace socratic::llm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role role) noexcept;

struct ChatMessage {
    Role role = Role::User;
    std::string content;
};

inline constexpr double kDialogueTemperature = 0.7;
inline constexpr double kExtractionTemperature = 0.2;

struct ChatRequest {
    std::vector<ChatMessage> messages;
    std::string model_id;  // empty: the provider's configured model
    double temperature = kDialogueTemperature;
    int max_tokens = 1024;

    /// Throws Error(InvalidArgument) when the request breaks its invariants.
    void validate() const;

    /// The content of the last user message, or empty when there is none.
    std::string_view last_user_message() const;
};

/// Convenience for the common single-prompt call shape.
ChatRequest make_request(std::string system, std::string user, double temperature);

struct TokenUsage {
    std::int64_t prompt = 0;
    std::int64_t completion = 0;
};

struct ChatResponse {
    std::string text;
    std::int64_t latency_ms = 0;  // wall clock of the successful attempt only
    std::optional<TokenUsage> token_usage;
    int retries = 0;  // attempts that failed before the successful one
};

/// A chat-completion backend. Implementations must be safe to call from
/// several threads at once.
class Provider {
public:
    virtual ~Provider() = default;

    /// Throws Error with a provider code (Timeout, RateLimited, AuthFailed,
    /// Transport, ScriptExhausted, ProviderError).
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

}  // namespace socratic::llm
