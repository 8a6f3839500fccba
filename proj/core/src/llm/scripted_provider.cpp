#include "socratic/llm/scripted_provider.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>

#include <nlohmann/json.hpp>

#include "socratic/error.hpp"

namespace socratic::llm {

ScriptedProvider::ScriptedProvider(std::vector<ScriptEntry> script)
    : script_(std::move(script)), consumed_(script_.size(), false) {
    if (script_.empty()) throw Error(Errc::InvalidArgument, "scripted provider needs at least one entry");
}

ScriptedProvider ScriptedProvider::from_file(const std::filesystem::path& path) {
    return ScriptedProvider(load_script(path));
}

ChatResponse ScriptedProvider::complete(const ChatRequest& request) {
    const auto start = std::chrono::steady_clock::now();
    request.validate();
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
    const std::string_view prompt = request.last_user_message();
    for (std::size_t i = 0; i < script_.size(); ++i) {
        if (consumed_[i]) continue;
        const auto& entry = script_[i];
        if (entry.matcher == "*" || prompt.find(entry.matcher) != std::string_view::npos) {
            consumed_[i] = true;
            ChatResponse resp;
            resp.text = entry.response;
            resp.latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
            return resp;
        }
    }
    throw Error(Errc::ScriptExhausted, "no unconsumed script entry matches call " + std::to_string(requests_.size()));
}

std::size_t ScriptedProvider::remaining() const {
    std::lock_guard lock(mutex_);
    return static_cast<std::size_t>(std::count(consumed_.begin(), consumed_.end(), false));
}

std::size_t ScriptedProvider::calls() const {
    std::lock_guard lock(mutex_);
    return requests_.size();
}

std::vector<ChatRequest> ScriptedProvider::requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
}

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open script " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidValue, "script " + path.string() + " is not valid JSON: " + e.what());
    }
    if (j.is_object() && j.contains("entries")) j = j["entries"];
    if (!j.is_array()) throw Error(Errc::InvalidValue, "script must be a JSON array of entries");
    std::vector<ScriptEntry> entries;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("response") || !e["response"].is_string()) {
            throw Error(Errc::InvalidValue, "script entry needs a string 'response'");
        }
        entries.push_back({e.value("match", std::string("*")), e["response"].get<std::string>()});
    }
    return entries;
}

}  // namespace socratic::llm
