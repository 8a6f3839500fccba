#include "socratic/api/server.hpp"

#include <map>
#include <mutex>
#include <utility>

#include <httplib.h>

#include "socratic/analytics/survey.hpp"
#include "socratic/dialogue/tutor.hpp"
#include "socratic/error.hpp"
#include "socratic/scenario/builder.hpp"
#include "socratic/text.hpp"

namespace socratic::api {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

struct ApiError {
    int status;
    std::string code;
    std::string message;
};

ApiError classify(const Error& e) {
    const std::string msg = e.what();
    if (e.is_provider_error()) return {502, "ProviderError", msg};
    switch (e.code()) {
        case Errc::InvalidArgument:
        case Errc::InvalidValue: return {400, "InvalidValue", msg};
        case Errc::MissingKey: return {400, "MissingKey", msg};
        case Errc::OutOfRange: return {400, "OutOfRange", msg};
        case Errc::IncompleteSelection: return {400, "IncompleteSelection", msg};
        case Errc::UnknownId: return {404, "UnknownScenario", msg};
        case Errc::UnknownSession: return {404, "UnknownSession", msg};
        case Errc::EmptyDataset: return {404, "EmptyDataset", msg};
        case Errc::SessionEnded: return {409, "SessionEnded", msg};
        case Errc::Busy: return {409, "Busy", msg};
        case Errc::NoJsonFound:
        case Errc::ExtractionFailed: return {502, "ProviderError", msg};
        default: return {500, "Internal", msg};
    }
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) {
    send_json(res, e.status, {{"code", e.code}, {"message", e.message}});
}

json parse_body(const httplib::Request& req) {
    if (text::trim(req.body).empty()) return json::object();
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ApiError{400, "InvalidBody", "request body must be a JSON object"};
    return j;
}

template <typename T>
T field(const json& body, const char* key) {
    if (!body.contains(key)) throw ApiError{400, "MissingKey", std::string("missing '") + key + "'"};
    try {
        return body.at(key).get<T>();
    } catch (const json::exception&) {
        throw ApiError{400, "InvalidValue", std::string("'") + key + "' has the wrong type"};
    }
}

ordered_json state_json(const dialogue::SessionState& s) {
    ordered_json coverage = ordered_json::array();
    for (auto wh : s.wh_coverage) coverage.push_back(std::string(to_string(wh)));
    return {{"correct_streak", s.correct_streak},
            {"partial_streak", s.partial_streak},
            {"hint_depth", s.hint_depth},
            {"wh_coverage", coverage},
            {"turn_count", s.turn_count},
            {"status", s.status == dialogue::SessionStatus::Ended ? "ended" : "active"}};
}

ordered_json session_json(const dialogue::DialogueSession& s) {
    auto j = store::transcript_header(s);
    j.erase("type");
    j.erase("version");
    j["state"] = state_json(s.state);
    auto& transcript = j["transcript"] = ordered_json::array();
    for (const auto& t : s.turns) transcript.push_back(store::transcript_turn(t));
    if (s.state.status == dialogue::SessionStatus::Ended) {
        transcript.push_back(store::transcript_end(s.summary));
        j["summary"] = s.summary;
    }
    return j;
}

struct SessionEntry {
    std::mutex mutex;  // held for the whole of one message or end request
    dialogue::DialogueSession session;
};

}  // namespace

struct Service::Impl {
    store::Store& store;
    llm::Provider& provider;
    ServiceOptions options;
    const prompt::TemplateLibrary& templates;
    httplib::Server server;

    std::mutex registry_mutex;
    std::map<std::string, std::shared_ptr<SessionEntry>, std::less<>> registry;

    Impl(store::Store& s, llm::Provider& p, ServiceOptions o, const prompt::TemplateLibrary& t)
        : store(s), provider(p), options(std::move(o)), templates(t) {
        routes();
    }

    using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

    // Maps every failure onto the documented {code, message} body.
    static httplib::Server::Handler guarded(Handler h) {
        return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
            try {
                h(req, res);
            } catch (const ApiError& e) {
                send_error(res, e);
            } catch (const Error& e) {
                send_error(res, classify(e));
            } catch (const json::exception& e) {
                send_error(res, {400, "InvalidBody", e.what()});
            } catch (const std::exception& e) {
                send_error(res, {500, "Internal", e.what()});
            }
        };
    }

    std::shared_ptr<SessionEntry> entry(const std::string& id) {
        std::lock_guard lock(registry_mutex);
        if (auto it = registry.find(id); it != registry.end()) return it->second;
        auto e = std::make_shared<SessionEntry>();
        e->session = store.load_session(id);
        registry.emplace(id, e);
        return e;
    }

    static std::unique_lock<std::mutex> claim(SessionEntry& e) {
        std::unique_lock lock(e.mutex, std::try_to_lock);
        if (!lock.owns_lock()) throw ApiError{409, "Busy", "another request is in progress for this session"};
        return lock;
    }

    void routes() {
        server.Get("/health", guarded([](const auto&, auto& res) { send_json(res, 200, {{"status", "ok"}}); }));

        server.Get("/pedagogies", guarded([](const auto&, auto& res) {
                       ordered_json out = ordered_json::array();
                       for (const auto& p : scenario::list_pedagogies()) {
                           out.push_back({{"name", p.name}, {"description", p.description}, {"implemented", p.implemented}});
                       }
                       send_json(res, 200, {{"pedagogies", out}});
                   }));

        server.Post("/tree/expand", guarded([this](const auto& req, auto& res) { expand_tree(req, res); }));
        server.Post("/scenarios", guarded([this](const auto& req, auto& res) { create_scenario(req, res); }));
        server.Get("/scenarios", guarded([this](const auto&, auto& res) {
                       ordered_json out = ordered_json::array();
                       for (const auto& id : store.list_scenarios()) {
                           const auto r = store.load_scenario(id);
                           out.push_back({{"id", r.id}, {"spec", scenario::to_json(r.spec)}, {"kcs", r.kcs.size()},
                                          {"has_matrix", r.matrix.has_value()}});
                       }
                       send_json(res, 200, {{"scenarios", out}});
                   }));
        server.Get("/scenarios/:id", guarded([this](const auto& req, auto& res) {
                       send_json(res, 200, store::to_json(store.load_scenario(req.path_params.at("id"))));
                   }));
        server.Post("/scenarios/:id/kcs", guarded([this](const auto& req, auto& res) { generate_kcs(req, res); }));
        server.Post("/scenarios/:id/matrix", guarded([this](const auto& req, auto& res) { generate_matrix(req, res); }));

        server.Post("/sessions", guarded([this](const auto& req, auto& res) { create_session(req, res); }));
        server.Get("/sessions", guarded([this](const auto&, auto& res) {
                       send_json(res, 200, {{"sessions", store.list_sessions()}});
                   }));
        server.Get("/sessions/:id", guarded([this](const auto& req, auto& res) {
                       auto e = entry(req.path_params.at("id"));
                       std::lock_guard lock(e->mutex);
                       send_json(res, 200, session_json(e->session));
                   }));
        server.Post("/sessions/:id/messages", guarded([this](const auto& req, auto& res) { post_message(req, res); }));
        server.Post("/sessions/:id/end", guarded([this](const auto& req, auto& res) { end(req, res); }));

        server.Post("/surveys", guarded([this](const auto& req, auto& res) {
                        auto response = analytics::survey_response_from_json(parse_body(req));
                        response.id.clear();
                        send_json(res, 201, {{"id", store.save_survey(response)}});
                    }));
        server.Get("/analytics/likert", guarded([this](const auto&, auto& res) {
                       send_json(res, 200, analytics::to_json(analytics::summarize(store.load_surveys())));
                   }));
        server.Get("/analytics/themes", guarded([this](const auto& req, auto& res) {
                       const auto question = req.has_param("question") ? req.get_param_value("question") : "all";
                       const auto texts = analytics::open_texts(store.load_surveys(), question);
                       const auto annotations = analytics::annotate_themes(texts, provider, templates);
                       send_json(res, 200, analytics::to_json(analytics::build_theme_graph(annotations)));
                   }));

        server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
            if (res.status == 404 && res.body.empty()) send_error(res, {404, "NotFound", "no such route"});
        });
    }

    void expand_tree(const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto level_name = field<std::string>(body, "level");
        const auto level = scenario::parse_level(level_name);
        if (!level) throw ApiError{400, "InvalidValue", "unknown level '" + level_name + "'"};
        scenario::Selections parents;
        if (body.contains("selections")) {
            parents = scenario::selections_from_strings(field<std::map<std::string, std::string>>(body, "selections"));
        }
        auto tree = scenario::CategoryTree::with_default_vocabulary();
        if (scenario::is_model_expanded(*level)) {
            tree = scenario::expand_tree_level(std::move(tree), *level, parents, provider, templates);
        }
        send_json(res, 200, {{"level", std::string(to_string(*level))}, {"candidates", tree.candidates(*level)}});
    }

    void create_scenario(const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto mode = field<std::string>(body, "mode");
        scenario::ScenarioSpec spec;
        if (mode == "tree") {
            spec = scenario::build_from_tree(
                scenario::selections_from_strings(field<std::map<std::string, std::string>>(body, "selections")));
        } else if (mode == "text") {
            spec = scenario::build_from_text(field<std::string>(body, "free_text"), provider, {}, templates);
        } else {
            throw ApiError{400, "InvalidValue", "mode must be \"tree\" or \"text\""};
        }
        if (body.contains("overrides")) {
            if (!body.at("overrides").is_object()) throw ApiError{400, "InvalidValue", "overrides must be an object"};
            json merged = scenario::to_json(spec);
            merged.update(body.at("overrides"));
            spec = scenario::spec_from_json(merged);
        }
        spec.validate();
        const auto id = store.save_scenario(spec);
        send_json(res, 201, {{"id", id}, {"spec", scenario::to_json(spec)}});
    }

    void generate_kcs(const httplib::Request& req, httplib::Response& res) {
        auto record = store.load_scenario(req.path_params.at("id"));
        auto generated = scenario::generate_kcs(record.spec, provider, templates);
        record.kcs = generated.kcs;
        record.matrix.reset();
        store.put_scenario(record);
        ordered_json kcs = ordered_json::array();
        for (const auto& kc : record.kcs) kcs.push_back(to_json(kc));
        send_json(res, 200, {{"kcs", kcs}, {"warnings", generated.warnings}});
    }

    void generate_matrix(const httplib::Request& req, httplib::Response& res) {
        auto record = store.load_scenario(req.path_params.at("id"));
        if (record.kcs.empty()) throw ApiError{409, "NoKnowledgeComponents", "generate knowledge components first"};
        record.matrix = scenario::generate_matrix(record.spec, record.kcs, provider, templates);
        store.put_scenario(record);
        send_json(res, 200, scenario::to_json(*record.matrix));
    }

    void create_session(const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto record = store.load_scenario(field<std::string>(body, "scenario_id"));
        if (!record.matrix) throw ApiError{409, "NoMatrix", "generate the question matrix first"};
        const auto kc_index = field<long>(body, "kc_index");
        if (kc_index < 0 || static_cast<std::size_t>(kc_index) >= record.matrix->kcs.size()) {
            throw ApiError{400, "OutOfRange", "kc_index must be below " + std::to_string(record.matrix->kcs.size())};
        }
        const auto wh_name = field<std::string>(body, "wh_type");
        const auto wh = parse_wh_type(wh_name);
        if (!wh) throw ApiError{400, "InvalidValue", "unknown wh_type '" + wh_name + "'"};

        dialogue::SessionConfig config;
        config.max_turns = options.max_turns;
        config.expected_answer = body.value("expected_answer", options.expected_answer);
        const auto idx = static_cast<std::size_t>(kc_index);
        const auto* cell = record.matrix->cell(idx, *wh);
        auto session = dialogue::start_session(record.spec, record.matrix->kcs[idx], *wh, cell ? *cell : std::string(),
                                               provider, config, idx, templates);
        store.create_session(session);

        auto e = std::make_shared<SessionEntry>();
        e->session = session;
        {
            std::lock_guard lock(registry_mutex);
            registry[session.id] = e;
        }
        send_json(res, 201, {{"session_id", session.id}, {"opening_turn", store::to_json(session.turns.front())}});
    }

    void post_message(const httplib::Request& req, httplib::Response& res) {
        const auto body = parse_body(req);
        const auto learner_text = field<std::string>(body, "text");
        auto e = entry(req.path_params.at("id"));
        auto lock = claim(*e);

        auto& session = e->session;
        auto [learner, tutor] = dialogue::submit_response(session, learner_text, provider, templates);
        store.append_turn(session.id, learner);
        store.append_turn(session.id, tutor);
        if (session.state.status == dialogue::SessionStatus::Ended) store.append_end(session.id, session.summary);

        ordered_json out{{"learner_turn", store::to_json(learner)},
                         {"tutor_turn", store::to_json(tutor)},
                         {"status", session.state.status == dialogue::SessionStatus::Ended ? "ended" : "active"}};
        if (session.state.status == dialogue::SessionStatus::Ended) out["summary"] = session.summary;

        if (req.get_header_value("Accept").find("text/event-stream") == std::string::npos) {
            send_json(res, 200, out);
            return;
        }
        // Incremental "token" events carry the tutor text word by word; the
        // closing "turn" event carries the full response body.
        std::string stream;
        for (const auto& word : text::split_words(tutor.text)) {
            stream += "event: token\ndata: " + ordered_json{{"text", word + " "}}.dump() + "\n\n";
        }
        stream += "event: turn\ndata: " + out.dump() + "\n\n";
        res.status = 200;
        res.set_header("Cache-Control", "no-cache");
        res.set_content(stream, "text/event-stream");
    }

    void end(const httplib::Request& req, httplib::Response& res) {
        auto e = entry(req.path_params.at("id"));
        auto lock = claim(*e);
        auto summary = dialogue::end_session(e->session, provider, templates);
        store.append_end(e->session.id, summary);
        send_json(res, 200, {{"summary", summary}});
    }
};

Service::Service(store::Store& store, llm::Provider& provider, ServiceOptions options,
                 const prompt::TemplateLibrary& templates)
    : impl_(std::make_unique<Impl>(store, provider, std::move(options), templates)) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw Error(Errc::IoError, "cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw Error(Errc::IoError, "cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void Service::listen() { impl_->server.listen_after_bind(); }

void Service::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace socratic::api
