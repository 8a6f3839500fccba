#include "socratic/llm/provider.hpp"

#include "socratic/error.hpp"

namespace socratic::llm {

std::string_view to_string(Role role) noexcept {
    switch (role) {
        case Role::System: return "system";
        case Role::User: return "user";
        case Role::Assistant: return "assistant";
    }
    return "user";
}

void ChatRequest::validate() const {
    if (messages.empty()) throw Error(Errc::InvalidArgument, "chat request has no messages");
    if (messages.front().role == Role::Assistant) {
        throw Error(Errc::InvalidArgument, "first message must be a system or user message");
    }
    if (!(temperature >= 0.0 && temperature <= 2.0)) {
        throw Error(Errc::InvalidArgument, "temperature must lie in [0, 2]");
    }
    if (max_tokens <= 0) throw Error(Errc::InvalidArgument, "max_tokens must be positive");
}

std::string_view ChatRequest::last_user_message() const {
    for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
        if (it->role == Role::User) return it->content;
    }
    return {};
}

ChatRequest make_request(std::string system, std::string user, double temperature) {
    ChatRequest req;
    if (!system.empty()) req.messages.push_back({Role::System, std::move(system)});
    req.messages.push_back({Role::User, std::move(user)});
    req.temperature = temperature;
    return req;
}

}  // namespace socratic::llm
