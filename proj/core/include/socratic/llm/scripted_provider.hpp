#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "socratic/llm/provider.hpp"

namespace socratic::llm {

struct ScriptEntry {
    std::string matcher;  // "*" matches anything; otherwise a substring of the last user message
    std::string response;
};

/// Deterministic provider replaying authored responses. Each call consumes the
/// first unconsumed entry whose matcher matches; consumed entries are never reused.
class ScriptedProvider final : public Provider {
public:
    /// Throws Error(InvalidArgument) on an empty script.
    explicit ScriptedProvider(std::vector<ScriptEntry> script);

    /// Reads a JSON array of {"match": ..., "response": ...} objects.
    static ScriptedProvider from_file(const std::filesystem::path& path);

    ChatResponse complete(const ChatRequest& request) override;

    std::size_t remaining() const;
    std::size_t calls() const;
    /// Requests seen so far, in call order.
    std::vector<ChatRequest> requests() const;

private:
    mutable std::mutex mutex_;
    std::vector<ScriptEntry> script_;
    std::vector<bool> consumed_;
    std::vector<ChatRequest> requests_;
};

std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

}  // namespace socratic::llm
