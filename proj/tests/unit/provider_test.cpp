#include <gtest/gtest.h>

#include <atomic>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "socratic/error.hpp"
#include "socratic/llm/http_provider.hpp"
#include "socratic/llm/scripted_provider.hpp"
#include "support/support.hpp"

namespace socratic::llm {
namespace {

using namespace std::chrono_literals;

ChatRequest ask(const std::string& user) { return make_request("system", user, kExtractionTemperature); }

TEST(ChatRequest, Validation) {
    EXPECT_THROW(ChatRequest{}.validate(), Error);
    auto r = ask("hi");
    r.temperature = 3.0;
    EXPECT_THROW(r.validate(), Error);
    EXPECT_NO_THROW(ask("hi").validate());
    EXPECT_EQ(ask("hi").last_user_message(), "hi");
}

TEST(Scripted, FirstUnconsumedMatchWins) {
    ScriptedProvider p({{"alpha", "A1"}, {"*", "any"}, {"alpha", "A2"}});
    EXPECT_EQ(p.complete(ask("beta")).text, "any");
    EXPECT_EQ(p.complete(ask("xx alpha xx")).text, "A1");
    EXPECT_EQ(p.complete(ask("alpha")).text, "A2");
    EXPECT_EQ(p.remaining(), 0u);
    EXPECT_EQ(p.calls(), 3u);
    try {
        p.complete(ask("alpha"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ScriptExhausted);
        EXPECT_TRUE(e.is_provider_error());
    }
}

TEST(Scripted, MatchesOnlyTheLastUserMessage) {
    ScriptedProvider p({{"first", "wrong"}, {"second", "right"}});
    ChatRequest r = ask("first");
    r.messages.push_back({Role::Assistant, "ok"});
    r.messages.push_back({Role::User, "second"});
    EXPECT_EQ(p.complete(r).text, "right");
    EXPECT_EQ(p.requests().size(), 1u);
}

TEST(Scripted, LoadsBothFileShapes) {
    testing::TempDir dir;
    std::ofstream(dir.path() / "a.json") << R"([{"match":"*","response":"x"}])";
    std::ofstream(dir.path() / "b.json") << R"({"entries":[{"match":"k","response":"y"}]})";
    EXPECT_EQ(load_script(dir.path() / "a.json").size(), 1u);
    EXPECT_EQ(load_script(dir.path() / "b.json").at(0).matcher, "k");
    std::ofstream(dir.path() / "c.json") << "[]";
    EXPECT_THROW(ScriptedProvider::from_file(dir.path() / "c.json"), Error);
}

// Fake chat-completions endpoint on a background thread.
class FakeEndpoint {
public:
    explicit FakeEndpoint(httplib::Server::Handler handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeEndpoint() {
        server_.stop();
        thread_.join();
    }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string completion(const std::string& text) {
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", text}}}}}},
                          {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 3}}}}
        .dump();
}

ProviderConfig config_for(const FakeEndpoint& ep) {
    ProviderConfig c;
    c.base_url = ep.base_url();
    c.model = "test-model";
    c.timeout_ms = 2000;
    return c;
}

TEST(Http, RetriesRateLimitThenSucceeds) {
    std::atomic<int> calls{0};
    nlohmann::json seen;
    std::string auth;
    FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
        if (calls++ < 2) {
            res.status = 429;
            return;
        }
        seen = nlohmann::json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(completion("hello"), "application/json");
    });
    std::vector<std::chrono::milliseconds> sleeps;
    HttpProvider p(config_for(ep), "sk-test", [&](std::chrono::milliseconds d) { sleeps.push_back(d); });

    auto r = p.complete(ask("hi"));
    EXPECT_EQ(r.text, "hello");
    EXPECT_EQ(r.retries, 2);
    EXPECT_EQ(calls.load(), 3);
    EXPECT_EQ(sleeps, (std::vector<std::chrono::milliseconds>{500ms, 1000ms}));
    ASSERT_TRUE(r.token_usage.has_value());
    EXPECT_EQ(r.token_usage->prompt, 12);
    EXPECT_EQ(seen["model"], "test-model");
    EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), kExtractionTemperature);
    EXPECT_EQ(seen["messages"][1]["role"], "user");
    EXPECT_EQ(auth, "Bearer sk-test");
}

TEST(Http, GivesUpAfterMaxRetries) {
    std::atomic<int> calls{0};
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.status = 503;
    });
    auto c = config_for(ep);
    c.max_retries = 3;
    HttpProvider p(c, "sk-test", [](std::chrono::milliseconds) {});
    try {
        p.complete(ask("hi"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Transport);
    }
    EXPECT_EQ(calls.load(), 4);
}

TEST(Http, AuthFailureIsNotRetriedAndKeyIsScrubbed) {
    std::atomic<int> calls{0};
    FakeEndpoint ep([&](const httplib::Request& req, httplib::Response& res) {
        ++calls;
        res.status = req.body.find("bad") != std::string::npos ? 400 : 401;
        res.set_content("echo " + req.get_header_value("Authorization"), "text/plain");
    });
    HttpProvider p(config_for(ep), "sk-secret-123", [](std::chrono::milliseconds) {});
    try {
        p.complete(ask("hi"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AuthFailed);
    }
    EXPECT_EQ(calls.load(), 1);
    try {
        p.complete(ask("bad"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::ProviderError);
        EXPECT_EQ(std::string(e.what()).find("sk-secret-123"), std::string::npos);
    }
}

TEST(Http, SlowEndpointTimesOut) {
    FakeEndpoint ep([](const httplib::Request&, httplib::Response& res) {
        std::this_thread::sleep_for(800ms);
        res.set_content(completion("late"), "application/json");
    });
    auto c = config_for(ep);
    c.timeout_ms = 150;
    c.max_retries = 0;
    HttpProvider p(c, "sk-test");
    const auto start = std::chrono::steady_clock::now();
    try {
        p.complete(ask("hi"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Timeout);
    }
    EXPECT_LT(std::chrono::steady_clock::now() - start, 700ms);
}

TEST(Http, MissingKeyFailsBeforeAnyRequest) {
    std::atomic<int> calls{0};
    FakeEndpoint ep([&](const httplib::Request&, httplib::Response& res) {
        ++calls;
        res.set_content(completion("x"), "application/json");
    });
    auto c = config_for(ep);
    c.api_key_ref = "SOCRATIC_TEST_KEY_THAT_IS_NOT_SET";
    HttpProvider p(c);
    try {
        p.complete(ask("hi"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::AuthFailed);
    }
    EXPECT_EQ(calls.load(), 0);
}

TEST(Http, ConfigValidation) {
    ProviderConfig c;
    c.max_retries = 4;
    EXPECT_THROW(c.validate(), Error);
    c = {};
    c.base_url = "no-scheme";
    EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace socratic::llm
