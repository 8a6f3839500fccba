// socratic: operator entry point for the tutoring service.

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "socratic/analytics/survey.hpp"
#include "socratic/api/server.hpp"
#include "socratic/dialogue/policy.hpp"
#include "socratic/dialogue/tutor.hpp"
#include "socratic/error.hpp"
#include "socratic/llm/http_provider.hpp"
#include "socratic/llm/scripted_provider.hpp"
#include "socratic/scenario/builder.hpp"
#include "socratic/store/store.hpp"
#include "socratic/text.hpp"

namespace {

using namespace socratic;
using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUnknownId = 2;

struct GlobalOptions {
    std::string data_dir = "socratic-data";
    std::string provider = "remote";
    std::string provider_config;
    std::string model;
    bool json = false;
};

std::unique_ptr<llm::Provider> make_provider(const GlobalOptions& g) {
    constexpr std::string_view kScripted = "scripted:";
    if (g.provider.rfind(kScripted, 0) == 0) {
        return std::make_unique<llm::ScriptedProvider>(llm::load_script(g.provider.substr(kScripted.size())));
    }
    if (g.provider != "remote") {
        throw Error(Errc::InvalidArgument, "--provider must be 'remote' or 'scripted:<path>'");
    }
    auto config = g.provider_config.empty() ? llm::ProviderConfig{} : llm::ProviderConfig::from_file(g.provider_config);
    if (!g.model.empty()) config.model = g.model;
    return std::make_unique<llm::HttpProvider>(config);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

// Accepts either {"selections": {...}} or the level map itself.
scenario::Selections read_tree_file(const std::string& path) {
    const auto j = json::parse(read_text_file(path));
    const auto& sel = j.contains("selections") ? j.at("selections") : j;
    return scenario::selections_from_strings(sel.get<std::map<std::string, std::string>>());
}

std::string describe(const dialogue::Turn& t) {
    std::string who = t.role == dialogue::Speaker::Tutor ? "tutor" : "you";
    if (t.prompt_type) who += " [" + std::string(dialogue::to_string(*t.prompt_type)) + "]";
    if (t.assessment) who += " [" + std::string(dialogue::to_string(t.assessment->classification)) + "]";
    return who + ": " + t.text;
}

int cmd_scenario_new(const GlobalOptions& g, const std::string& tree_file, const std::string& free_text, int number) {
    auto provider = make_provider(g);
    store::Store store(g.data_dir);

    auto spec = tree_file.empty() ? scenario::build_from_text(free_text, *provider)
                                  : scenario::build_from_tree(read_tree_file(tree_file));
    if (number > 0) spec.theNumber = number;
    spec.validate();
    auto kcs = scenario::generate_kcs(spec, *provider);
    auto matrix = scenario::generate_matrix(spec, kcs.kcs, *provider);
    const auto id = store.save_scenario(spec, matrix);

    if (g.json) {
        auto record = store.load_scenario(id);
        auto out = store::to_json(record);
        out["warnings"] = kcs.warnings;
        std::cout << out.dump(2) << '\n';
        return kExitOk;
    }
    std::cout << "scenario " << id << '\n';
    std::cout << "  " << spec.theDomain << " / " << spec.theContext << " -> " << spec.theObjective << '\n';
    for (std::size_t i = 0; i < matrix.kcs.size(); ++i) {
        std::cout << "  [" << i << "] " << matrix.kcs[i].theKC;
        if (!matrix.kcs[i].warnings.empty()) std::cout << "  (" << text::join({matrix.kcs[i].warnings.begin(), matrix.kcs[i].warnings.end()}, ", ") << ")";
        std::cout << '\n';
    }
    for (const auto& w : kcs.warnings) std::cout << "  warning: " << w << '\n';
    return kExitOk;
}

int cmd_scenario_list(const GlobalOptions& g) {
    store::Store store(g.data_dir);
    ordered_json out = ordered_json::array();
    for (const auto& id : store.list_scenarios()) {
        const auto r = store.load_scenario(id);
        if (g.json) {
            out.push_back({{"id", id}, {"theKC", r.spec.theKC}, {"kcs", r.kcs.size()}});
        } else {
            std::cout << id << "  " << r.spec.theKC << "  (" << r.kcs.size() << " concepts)\n";
        }
    }
    if (g.json) std::cout << out.dump(2) << '\n';
    return kExitOk;
}

int cmd_chat(const GlobalOptions& g, const std::string& scenario_id, std::size_t kc_index, const std::string& wh_name,
             int max_turns, const std::string& expected_answer) {
    auto provider = make_provider(g);
    store::Store store(g.data_dir);
    const auto record = store.load_scenario(scenario_id);
    if (!record.matrix) throw Error(Errc::InvalidValue, "scenario has no question matrix");
    if (kc_index >= record.matrix->kcs.size()) {
        throw Error(Errc::OutOfRange, "--kc must be below " + std::to_string(record.matrix->kcs.size()));
    }
    const auto wh = parse_wh_type(wh_name);
    if (!wh) throw Error(Errc::InvalidValue, "unknown wh type '" + wh_name + "'");

    dialogue::SessionConfig config;
    config.max_turns = max_turns;
    config.expected_answer = expected_answer;
    const auto* cell = record.matrix->cell(kc_index, *wh);
    auto session = dialogue::start_session(record.spec, record.matrix->kcs[kc_index], *wh, cell ? *cell : "",
                                           *provider, config, kc_index);
    store.create_session(session);
    std::cerr << "session " << session.id << '\n';
    std::cout << describe(session.turns.front()) << '\n';

    std::string line;
    while (session.state.status == dialogue::SessionStatus::Active && std::getline(std::cin, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto [learner, tutor] = dialogue::submit_response(session, line, *provider);
        store.append_turn(session.id, learner);
        store.append_turn(session.id, tutor);
        std::cout << describe(tutor) << '\n';
    }
    if (session.state.status == dialogue::SessionStatus::Active) dialogue::end_session(session, *provider);
    store.append_end(session.id, session.summary);

    if (g.json) {
        std::cout << ordered_json{{"session_id", session.id}, {"turns", session.turns.size()}, {"summary", session.summary}}
                         .dump(2)
                  << '\n';
    } else {
        std::cout << "summary: " << session.summary << '\n';
    }
    return kExitOk;
}

// Re-derives every tutor move from the stored assessments and compares.
std::vector<std::string> divergences(const dialogue::DialogueSession& s) {
    std::vector<std::string> out;
    try {
        dialogue::check_turn_sequence(s.turns);
    } catch (const Error& e) {
        out.emplace_back(e.what());
        return out;
    }
    const auto& policy = dialogue::policy_for(s.config.policy_id);
    dialogue::SessionState state;
    for (std::size_t i = 0; i < s.turns.size(); ++i) {
        const auto& t = s.turns[i];
        if (t.role == dialogue::Speaker::Learner) {
            if (!t.assessment) {
                out.push_back("turn " + std::to_string(i) + ": learner turn without an assessment");
            } else if (i + 1 < s.turns.size()) {
                const auto expected = policy.select(dialogue::policy_input(state), t.assessment->classification);
                if (s.turns[i + 1].prompt_type != expected) {
                    out.push_back("turn " + std::to_string(i + 1) + ": stored move " +
                                  std::string(dialogue::to_string(*s.turns[i + 1].prompt_type)) + ", policy gives " +
                                  std::string(dialogue::to_string(expected)));
                }
            }
        }
        if (t.role == dialogue::Speaker::Tutor && !dialogue::is_valid_tutor_turn(t.text) && i > 0) {
            out.push_back("turn " + std::to_string(i) + ": tutor turn is not a single closing wh-question");
        }
        dialogue::apply_turn(state, t, s.config);
    }
    return out;
}

int cmd_replay(const GlobalOptions& g, const std::string& session_id, bool verify) {
    store::Store store(g.data_dir);
    const auto session = store.load_session(session_id);
    const auto problems = verify ? divergences(session) : std::vector<std::string>{};

    if (g.json) {
        ordered_json out{{"session_id", session.id}, {"turns", ordered_json::array()}};
        for (const auto& t : session.turns) out["turns"].push_back(store::to_json(t));
        if (!session.summary.empty()) out["summary"] = session.summary;
        if (verify) out["divergences"] = problems;
        std::cout << out.dump(2) << '\n';
    } else {
        for (const auto& t : session.turns) std::cout << t.index << "  " << describe(t) << '\n';
        if (!session.summary.empty()) std::cout << "summary: " << session.summary << '\n';
        if (verify) {
            for (const auto& p : problems) std::cout << "divergence: " << p << '\n';
            std::cout << problems.size() << " divergences\n";
        }
    }
    return problems.empty() ? kExitOk : kExitFailure;
}

std::vector<analytics::SurveyResponse> survey_input(const store::Store& store, const std::string& csv) {
    if (csv.empty()) return store.load_surveys();
    auto responses = store::parse_survey_csv(read_text_file(csv));
    for (std::size_t i = 0; i < responses.size(); ++i) responses[i].id = "row-" + std::to_string(i + 1);
    return responses;
}

int cmd_report_likert(const GlobalOptions& g, const std::string& csv) {
    store::Store store(g.data_dir);
    const auto summary = analytics::summarize(survey_input(store, csv));
    const auto j = analytics::to_json(summary);
    write_text_file(store.root() / "reports" / "likert.json", j.dump(2) + "\n");
    std::cout << (g.json ? j.dump(2) + "\n" : analytics::format_table(summary));
    return kExitOk;
}

int cmd_report_themes(const GlobalOptions& g, const std::string& question) {
    auto provider = make_provider(g);
    store::Store store(g.data_dir);
    const auto annotations = analytics::annotate_themes(analytics::open_texts(store.load_surveys(), question), *provider);
    const auto graph = analytics::build_theme_graph(annotations);
    const auto j = analytics::to_json(graph);
    write_text_file(store.root() / "reports" / "themes.json", j.dump(2) + "\n");
    std::cout << (g.json ? j.dump(2) + "\n" : analytics::format_table(graph));
    return kExitOk;
}

int cmd_survey_import(const GlobalOptions& g, const std::string& csv) {
    store::Store store(g.data_dir);
    const auto responses = store::parse_survey_csv(read_text_file(csv));
    for (const auto& r : responses) store.save_survey(r);
    std::cout << "imported " << responses.size() << " responses\n";
    return kExitOk;
}

api::Service* g_service = nullptr;

int cmd_serve(const GlobalOptions& g, const std::string& addr, int max_turns, const std::string& expected_answer) {
    const auto colon = addr.rfind(':');
    if (colon == std::string::npos) throw Error(Errc::InvalidArgument, "--addr must be host:port");
    const auto host = addr.substr(0, colon);
    const int port = std::stoi(addr.substr(colon + 1));

    auto provider = make_provider(g);
    store::Store store(g.data_dir);
    api::Service service(store, *provider, {max_turns, expected_answer});
    const int bound = service.bind(host, port);
    g_service = &service;
    std::signal(SIGINT, [](int) {
        if (g_service) g_service->stop();
    });
    std::signal(SIGTERM, [](int) {
        if (g_service) g_service->stop();
    });
    std::cerr << "listening on " << host << ":" << bound << '\n';
    service.listen();
    g_service = nullptr;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Socratic tutoring service: scenarios, dialogue sessions and survey analytics"};
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--data-dir", g.data_dir, "Directory holding scenarios, sessions and surveys")->capture_default_str();
    app.add_option("--provider", g.provider, "remote | scripted:<path>")->capture_default_str();
    app.add_option("--provider-config", g.provider_config, "JSON file with remote provider settings");
    app.add_option("--model", g.model, "Model id for the remote provider");
    app.add_flag("--json", g.json, "Machine-readable output");

    auto* serve = app.add_subcommand("serve", "Run the HTTP service");
    std::string addr = "127.0.0.1:8080";
    int max_turns = dialogue::kDefaultMaxTurns;
    std::string expected_answer;
    serve->add_option("--addr", addr, "host:port to bind")->capture_default_str();
    serve->add_option("--max-turns", max_turns, "Tutor turns before a session ends")->check(CLI::PositiveNumber);
    serve->add_option("--expected-answer", expected_answer, "Answer the tutor must never reveal");

    auto* scenario_cmd = app.add_subcommand("scenario", "Build and list scenarios");
    scenario_cmd->require_subcommand(1);
    auto* scenario_new = scenario_cmd->add_subcommand("new", "Create a scenario with concepts and question matrix");
    std::string tree_file;
    std::string free_text;
    auto* tree_opt = scenario_new->add_option("--tree", tree_file, "JSON file of category-tree selections")
                         ->check(CLI::ExistingFile);
    auto* text_opt = scenario_new->add_option("--text", free_text, "Free-text description of the learning need");
    tree_opt->excludes(text_opt);
    int number = 0;
    scenario_new->add_option("--number", number, "How many concepts to generate")
        ->check(CLI::Range(1, scenario::kMaxConcepts));
    scenario_new->callback([&] {
        if (tree_file.empty() && free_text.empty()) throw CLI::RequiredError("--tree or --text");
    });
    auto* scenario_list = scenario_cmd->add_subcommand("list", "List stored scenarios");

    auto* chat = app.add_subcommand("chat", "Interactive tutoring session on stdin/stdout");
    std::string scenario_id;
    std::size_t kc_index = 0;
    std::string wh = "What";
    int chat_max_turns = dialogue::kDefaultMaxTurns;
    std::string chat_expected;
    chat->add_option("--scenario", scenario_id, "Scenario id")->required();
    chat->add_option("--kc", kc_index, "Concept row of the matrix")->capture_default_str();
    chat->add_option("--wh", wh, "Question column: What, Why, How, Who or When")->capture_default_str();
    chat->add_option("--max-turns", chat_max_turns, "Tutor turns before the session ends")->check(CLI::PositiveNumber);
    chat->add_option("--expected-answer", chat_expected, "Answer the tutor must never reveal");

    auto* replay = app.add_subcommand("replay", "Print a stored transcript");
    std::string session_id;
    bool verify = false;
    replay->add_option("--session", session_id, "Session id")->required();
    replay->add_flag("--verify", verify, "Recompute state and tutor moves and report divergences");

    auto* survey = app.add_subcommand("survey", "Survey data");
    survey->require_subcommand(1);
    auto* survey_import = survey->add_subcommand("import", "Append responses from a CSV file");
    std::string import_csv;
    survey_import->add_option("--csv", import_csv, "participant_id,q1..q10 file")->required()->check(CLI::ExistingFile);

    auto* report = app.add_subcommand("report", "Survey analytics");
    report->require_subcommand(1);
    auto* likert = report->add_subcommand("likert", "Per-question Likert distribution");
    std::string likert_csv;
    likert->add_option("--csv", likert_csv, "Read this CSV instead of the stored responses")->check(CLI::ExistingFile);
    auto* themes = report->add_subcommand("themes", "Theme co-mention network of the open answers");
    std::string theme_question = "all";
    themes->add_option("--question", theme_question, "q11, q12 or all")
        ->check(CLI::IsMember({"q11", "q12", "all"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (*serve) return cmd_serve(g, addr, max_turns, expected_answer);
        if (*scenario_new) return cmd_scenario_new(g, tree_file, free_text, number);
        if (*scenario_list) return cmd_scenario_list(g);
        if (*chat) return cmd_chat(g, scenario_id, kc_index, wh, chat_max_turns, chat_expected);
        if (*replay) return cmd_replay(g, session_id, verify);
        if (*survey_import) return cmd_survey_import(g, import_csv);
        if (*likert) return cmd_report_likert(g, likert_csv);
        if (*themes) return cmd_report_themes(g, theme_question);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        const bool unknown = e.code() == Errc::UnknownId || e.code() == Errc::UnknownSession;
        return unknown ? kExitUnknownId : kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
