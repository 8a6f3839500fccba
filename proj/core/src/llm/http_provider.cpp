#include "socratic/llm/http_provider.hpp"

#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "socratic/error.hpp"

namespace socratic::llm {

namespace {

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;    // request path for chat completions
};

Endpoint parse_base_url(const std::string& base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(Errc::InvalidArgument, "base_url must include a scheme: " + base_url);
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    Endpoint ep;
    ep.origin = base_url.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? std::string{} : base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    ep.path = prefix + "/chat/completions";
    return ep;
}

std::string scrub(std::string s, const std::string& secret) {
    if (secret.empty()) return s;
    for (auto pos = s.find(secret); pos != std::string::npos; pos = s.find(secret, pos)) {
        s.replace(pos, secret.size(), "***");
    }
    return s;
}

// Calls client.stop() if the attempt outlives its deadline, bounding the total
// time of one attempt rather than each individual socket read.
class Watchdog {
public:
    Watchdog(httplib::Client& client, std::chrono::milliseconds limit)
        : thread_([this, &client, limit] {
              std::unique_lock lock(mutex_);
              if (!cv_.wait_for(lock, limit, [this] { return done_; })) {
                  fired_ = true;
                  client.stop();
              }
          }) {}

    ~Watchdog() {
        {
            std::lock_guard lock(mutex_);
            done_ = true;
        }
        cv_.notify_all();
        thread_.join();
    }

    bool fired() {
        std::lock_guard lock(mutex_);
        return fired_;
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    bool done_ = false;
    bool fired_ = false;
    std::thread thread_;
};

}  // namespace

void ProviderConfig::validate() const {
    if (timeout_ms <= 0) throw Error(Errc::InvalidArgument, "timeout_ms must be positive");
    if (max_retries < 0 || max_retries > 3) throw Error(Errc::InvalidArgument, "max_retries must lie in [0, 3]");
    if (backoff_base_ms < 0) throw Error(Errc::InvalidArgument, "backoff_base_ms must be non-negative");
    if (api_key_ref.empty()) throw Error(Errc::InvalidArgument, "api_key_ref must name an environment variable");
    parse_base_url(base_url);
}

ProviderConfig ProviderConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open provider config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::InvalidValue, "provider config is not valid JSON: " + std::string(e.what()));
    }
    ProviderConfig c;
    c.base_url = j.value("base_url", c.base_url);
    c.api_key_ref = j.value("api_key_ref", c.api_key_ref);
    c.model = j.value("model", c.model);
    c.timeout_ms = j.value("timeout_ms", c.timeout_ms);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_base_ms = j.value("backoff_base_ms", c.backoff_base_ms);
    c.validate();
    return c;
}

HttpProvider::HttpProvider(ProviderConfig config) : config_(std::move(config)) {
    config_.validate();
    if (const char* key = std::getenv(config_.api_key_ref.c_str())) api_key_ = key;
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

HttpProvider::HttpProvider(ProviderConfig config, std::string api_key, Sleeper sleeper)
    : config_(std::move(config)), api_key_(std::move(api_key)), sleeper_(std::move(sleeper)) {
    config_.validate();
    if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

ChatResponse HttpProvider::complete(const ChatRequest& request) {
    request.validate();
    if (api_key_.empty()) {
        throw Error(Errc::AuthFailed, "environment variable " + config_.api_key_ref + " is not set");
    }

    const Endpoint ep = parse_base_url(config_.base_url);
    nlohmann::json body;
    body["model"] = request.model_id.empty() ? config_.model : request.model_id;
    body["temperature"] = request.temperature;
    body["max_tokens"] = request.max_tokens;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : request.messages) {
        body["messages"].push_back({{"role", to_string(m.role)}, {"content", m.content}});
    }
    const std::string payload = body.dump();
    const httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    const auto limit = std::chrono::milliseconds(config_.timeout_ms);

    Errc last_code = Errc::Transport;
    std::string last_message;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) sleeper_(std::chrono::milliseconds(config_.backoff_base_ms) * (1 << (attempt - 1)));

        httplib::Client client(ep.origin);
        client.set_connection_timeout(limit);
        client.set_read_timeout(limit);
        client.set_write_timeout(limit);

        const auto start = std::chrono::steady_clock::now();
        httplib::Result res;
        bool timed_out = false;
        {
            Watchdog watchdog(client, limit);
            res = client.Post(ep.path, headers, payload, "application/json");
            timed_out = watchdog.fired();
        }
        const auto elapsed =
            std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);

        if (!res) {
            timed_out = timed_out || elapsed >= limit;
            last_code = timed_out ? Errc::Timeout : Errc::Transport;
            last_message = timed_out ? "request exceeded " + std::to_string(config_.timeout_ms) + " ms"
                                     : "transport error: " + httplib::to_string(res.error());
            continue;
        }

        const int status = res->status;
        if (status == 401 || status == 403) {
            throw Error(Errc::AuthFailed, "endpoint rejected credentials (HTTP " + std::to_string(status) + ")");
        }
        if (status == 429) {
            last_code = Errc::RateLimited;
            last_message = "rate limited (HTTP 429)";
            continue;
        }
        if (status >= 500) {
            last_code = Errc::Transport;
            last_message = "server error (HTTP " + std::to_string(status) + ")";
            continue;
        }
        if (status < 200 || status >= 300) {
            throw Error(Errc::ProviderError,
                        "HTTP " + std::to_string(status) + ": " + scrub(res->body.substr(0, 200), api_key_));
        }

        ChatResponse out;
        out.latency_ms = elapsed.count();
        out.retries = attempt;
        try {
            const auto j = nlohmann::json::parse(res->body);
            out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
            if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
                out.token_usage = TokenUsage{u->value("prompt_tokens", std::int64_t{0}),
                                             u->value("completion_tokens", std::int64_t{0})};
            }
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ProviderError, std::string("malformed completion body: ") + e.what());
        }
        return out;
    }
    throw Error(last_code, last_message + " after " + std::to_string(config_.max_retries) + " retries");
}

}  // namespace socratic::llm
