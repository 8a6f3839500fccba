#include <gtest/gtest.h>

#include <condition_variable>
#include <future>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "socratic/api/server.hpp"
#include "socratic/llm/scripted_provider.hpp"
#include "support/support.hpp"

namespace socratic::api {
namespace {

using nlohmann::json;

std::vector<llm::ScriptEntry> full_script() {
    auto script = llm::load_script(testing::fixture("scenario_script.json"));
    for (auto& e : llm::load_script(testing::fixture("chat_script.json"))) script.push_back(std::move(e));
    return script;
}

// Holds the first matching call until released.
class GateProvider final : public llm::Provider {
public:
    explicit GateProvider(llm::Provider& inner) : inner_(inner) {}
    llm::ChatResponse complete(const llm::ChatRequest& request) override {
        {
            std::unique_lock lock(mutex_);
            if (armed_) {
                armed_ = false;
                entered_.set_value();
                cv_.wait(lock, [this] { return released_; });
            }
        }
        return inner_.complete(request);
    }
    std::future<void> arm() {
        std::lock_guard lock(mutex_);
        armed_ = true;
        entered_ = {};
        return entered_.get_future();
    }
    void release() {
        std::lock_guard lock(mutex_);
        released_ = true;
        cv_.notify_all();
    }

private:
    llm::Provider& inner_;
    std::mutex mutex_;
    std::condition_variable cv_;
    std::promise<void> entered_;
    bool armed_ = false;
    bool released_ = false;
};

class Running {
public:
    Running(store::Store& store, llm::Provider& provider, ServiceOptions options = {})
        : service_(store, provider, options) {
        port_ = service_.bind("127.0.0.1", 0);
        thread_ = std::thread([this] { service_.listen(); });
        service_.wait_until_ready();
    }
    ~Running() {
        service_.stop();
        thread_.join();
    }
    httplib::Client client() const {
        httplib::Client c("127.0.0.1", port_);
        c.set_read_timeout(10, 0);
        return c;
    }

private:
    Service service_;
    int port_ = 0;
    std::thread thread_;
};

json body_of(const httplib::Result& r) {
    EXPECT_TRUE(r) << "request failed";
    return r ? json::parse(r->body) : json();
}

json post(httplib::Client& c, const std::string& path, const json& body, int expected) {
    auto r = c.Post(path, body.dump(), "application/json");
    EXPECT_TRUE(r);
    if (!r) return {};
    EXPECT_EQ(r->status, expected) << path << ": " << r->body;
    return json::parse(r->body);
}

json tree_selections() { return json::parse(testing::read_file(testing::fixture("tree.json")))["selections"]; }

std::string ready_scenario(httplib::Client& c) {
    const auto created = post(c, "/scenarios", {{"mode", "tree"}, {"selections", tree_selections()},
                                                {"overrides", {{"theNumber", 2}}}}, 201);
    const std::string id = created["id"];
    post(c, "/scenarios/" + id + "/kcs", json::object(), 200);
    post(c, "/scenarios/" + id + "/matrix", json::object(), 200);
    return id;
}

TEST(Api, FullSessionLifecycle) {
    testing::TempDir dir;
    store::Store store(dir.path());
    llm::ScriptedProvider provider(full_script());
    Running server(store, provider);
    auto c = server.client();

    EXPECT_EQ(body_of(c.Get("/health"))["status"], "ok");
    EXPECT_EQ(body_of(c.Get("/pedagogies"))["pedagogies"].size(), 5u);

    const auto scenario_id = ready_scenario(c);
    const auto record = body_of(c.Get(("/scenarios/" + scenario_id).c_str()));
    EXPECT_EQ(record["kcs"].size(), 2u);

    const auto created = post(c, "/sessions", {{"scenario_id", scenario_id}, {"kc_index", 0}, {"wh_type", "Why"}}, 201);
    const std::string sid = created["session_id"];
    EXPECT_EQ(created["opening_turn"]["role"], "tutor");
    EXPECT_NE(created["opening_turn"]["text"].get<std::string>().find("Why might a thank-you reply"),
              std::string::npos);

    for (const auto* line : {"Praise makes students happy.", "Praise is a reward.", "Vary the praise."}) {
        const auto reply = post(c, "/sessions/" + sid + "/messages", {{"text", line}}, 200);
        EXPECT_EQ(reply["learner_turn"]["role"], "learner");
        EXPECT_EQ(reply["status"], "active");
    }
    const auto ended = post(c, "/sessions/" + sid + "/end", json::object(), 200);
    EXPECT_NE(ended["summary"].get<std::string>().find("Use praise to raise participation"), std::string::npos);

    const auto session = body_of(c.Get(("/sessions/" + sid).c_str()));
    EXPECT_EQ(session["transcript"].size(), 8u);
    EXPECT_EQ(session["state"]["status"], "ended");
    EXPECT_EQ(session["state"]["correct_streak"], 2);

    const auto again = post(c, "/sessions/" + sid + "/messages", {{"text", "more"}}, 409);
    EXPECT_EQ(again["code"], "SessionEnded");
    EXPECT_EQ(post(c, "/sessions/" + sid + "/end", json::object(), 409)["code"], "SessionEnded");
    EXPECT_EQ(provider.remaining(), 0u);
}

TEST(Api, SessionsSurviveRestart) {
    testing::TempDir dir;
    std::string sid;
    {
        store::Store store(dir.path());
        llm::ScriptedProvider provider(full_script());
        Running server(store, provider);
        auto c = server.client();
        const auto scenario_id = ready_scenario(c);
        sid = post(c, "/sessions", {{"scenario_id", scenario_id}, {"kc_index", 1}, {"wh_type", "How"}}, 201)["session_id"];
        post(c, "/sessions/" + sid + "/messages", {{"text", "Ignore it."}}, 200);
    }
    store::Store store(dir.path());
    llm::ScriptedProvider provider({{"Classify the latest learner response", R"({"classification": "Correct"})"},
                                    {"Compose the next tutor turn", testing::kGoodTutorReply}});
    Running server(store, provider);
    auto c = server.client();
    EXPECT_EQ(body_of(c.Get(("/sessions/" + sid).c_str()))["transcript"].size(), 3u);
    const auto reply = post(c, "/sessions/" + sid + "/messages", {{"text", "Stop replying to it."}}, 200);
    EXPECT_EQ(reply["tutor_turn"]["index"], 4);
    EXPECT_EQ(body_of(c.Get("/sessions"))["sessions"].size(), 1u);
}

TEST(Api, ErrorsUseDocumentedCodes) {
    testing::TempDir dir;
    store::Store store(dir.path());
    llm::ScriptedProvider provider(std::vector<llm::ScriptEntry>{{"*", "nothing useful"}});
    Running server(store, provider);
    auto c = server.client();

    auto r = c.Get("/nowhere");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 404);
    EXPECT_EQ(json::parse(r->body)["code"], "NotFound");

    EXPECT_EQ(body_of(c.Get("/sessions/00000000-0000-0000-0000-000000000000"))["code"], "UnknownSession");
    EXPECT_EQ(body_of(c.Get("/scenarios/00000000-0000-0000-0000-000000000000"))["code"], "UnknownScenario");

    auto bad = c.Post("/scenarios", "{not json", "application/json");
    ASSERT_TRUE(bad);
    EXPECT_EQ(bad->status, 400);
    EXPECT_EQ(json::parse(bad->body)["code"], "InvalidBody");

    auto partial = tree_selections();
    partial.erase("target");
    const auto incomplete = post(c, "/scenarios", {{"mode", "tree"}, {"selections", partial}}, 400);
    EXPECT_EQ(incomplete["code"], "IncompleteSelection");
    EXPECT_EQ(post(c, "/scenarios", {{"selections", partial}}, 400)["code"], "MissingKey");

    const std::string id = post(c, "/scenarios", {{"mode", "tree"}, {"selections", tree_selections()}}, 201)["id"];
    EXPECT_EQ(post(c, "/scenarios/" + id + "/matrix", json::object(), 409)["code"], "NoKnowledgeComponents");
    EXPECT_EQ(post(c, "/sessions", {{"scenario_id", id}, {"kc_index", 0}, {"wh_type", "Why"}}, 409)["code"],
              "NoMatrix");
    EXPECT_EQ(post(c, "/scenarios/" + id + "/kcs", json::object(), 502)["code"], "ProviderError");

    json survey = {{"participant_id", "P1"}, {"q11", "instant feedback"}, {"q12", ""}};
    for (int q = 1; q <= 10; ++q) survey["q" + std::to_string(q)] = 5;
    EXPECT_EQ(body_of(c.Get("/analytics/likert"))["code"], "EmptyDataset");
    survey["q3"] = 9;
    EXPECT_EQ(post(c, "/surveys", survey, 400)["code"], "OutOfRange");
    survey["q3"] = 4;
    post(c, "/surveys", survey, 201);
    const auto likert = body_of(c.Get("/analytics/likert"));
    EXPECT_EQ(likert["respondents"], 1);
    EXPECT_DOUBLE_EQ(likert["overall_at_or_above_4"].get<double>(), 100.0);
    EXPECT_EQ(body_of(c.Get("/analytics/themes?question=q9"))["code"], "InvalidValue");
}

TEST(Api, ThemesEndpointReturnsNodeLinkGraph) {
    testing::TempDir dir;
    store::Store store(dir.path());
    auto provider = llm::ScriptedProvider::from_file(testing::fixture("themes_script.json"));
    Running server(store, provider);
    auto c = server.client();
    json survey = {{"participant_id", "P1"}, {"q11", "The instant feedback"}, {"q12", "A bit slow"}};
    for (int q = 1; q <= 10; ++q) survey["q" + std::to_string(q)] = 6;
    post(c, "/surveys", survey, 201);
    const auto graph = body_of(c.Get("/analytics/themes?question=q11"));
    ASSERT_EQ(graph["nodes"].size(), 2u);
    EXPECT_EQ(graph["links"].size(), 1u);
    EXPECT_EQ(graph["links"][0]["weight"], 1);
}

TEST(Api, StreamsTokensThenTurn) {
    testing::TempDir dir;
    store::Store store(dir.path());
    llm::ScriptedProvider provider(full_script());
    Running server(store, provider);
    auto c = server.client();
    const auto scenario_id = ready_scenario(c);
    const std::string sid =
        post(c, "/sessions", {{"scenario_id", scenario_id}, {"kc_index", 0}, {"wh_type", "Why"}}, 201)["session_id"];
    auto r = c.Post(("/sessions/" + sid + "/messages").c_str(), {{"Accept", "text/event-stream"}},
                    json{{"text", "Praise helps."}}.dump(), "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(r->get_header_value("Content-Type"), "text/event-stream");
    const auto& body = r->body;
    const auto first_token = body.find("event: token\n");
    const auto turn = body.find("event: turn\n");
    ASSERT_NE(first_token, std::string::npos);
    ASSERT_NE(turn, std::string::npos);
    EXPECT_LT(first_token, turn);
    const auto data = body.substr(turn + std::string("event: turn\ndata: ").size());
    EXPECT_EQ(json::parse(data.substr(0, data.find('\n')))["tutor_turn"]["index"], 2);
}

TEST(Api, ConcurrentMessageIsBusy) {
    testing::TempDir dir;
    store::Store store(dir.path());
    llm::ScriptedProvider inner(full_script());
    GateProvider provider(inner);
    Running server(store, provider);
    auto c = server.client();
    const auto scenario_id = ready_scenario(c);
    const std::string sid =
        post(c, "/sessions", {{"scenario_id", scenario_id}, {"kc_index", 0}, {"wh_type", "Why"}}, 201)["session_id"];

    auto entered = provider.arm();
    auto first = std::async(std::launch::async, [&] {
        auto c1 = server.client();
        return c1.Post(("/sessions/" + sid + "/messages").c_str(), json{{"text", "one"}}.dump(), "application/json");
    });
    entered.wait();
    EXPECT_EQ(post(c, "/sessions/" + sid + "/messages", {{"text", "two"}}, 409)["code"], "Busy");
    provider.release();
    auto r = first.get();
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(body_of(c.Get(("/sessions/" + sid).c_str()))["transcript"].size(), 3u);
}

}  // namespace
}  // namespace socratic::api
