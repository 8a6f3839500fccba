#include "socratic/store/store.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "socratic/dialogue/tutor.hpp"
#include "socratic/error.hpp"
#include "socratic/id.hpp"
#include "socratic/text.hpp"

namespace socratic::store {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr int kTranscriptVersion = 1;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Readers never observe a half-written file: write a sibling, then rename.
void write_atomic(const fs::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp-" + new_id();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(Errc::IoError, "cannot replace " + path.string());
    }
}

void append_line(const fs::path& path, const std::string& line) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    out << line << '\n';
    out.flush();
    if (!out) throw Error(Errc::IoError, "cannot append to " + path.string());
}

std::vector<std::string> stems(const fs::path& dir, std::string_view extension) {
    std::vector<std::string> out;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file() || entry.path().extension() != extension) continue;
        auto stem = entry.path().stem().string();
        if (is_valid_id(stem)) out.push_back(std::move(stem));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                fields.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                fields.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.emplace_back();
        } else {
            fields.back() += c;
        }
    }
    if (quoted) throw Error(Errc::CorruptRecord, "unterminated quote in survey row");
    return fields;
}

std::string_view strip_cr(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
}

template <typename T>
T json_get(const json& j, const char* key) {
    if (!j.contains(key)) throw Error(Errc::MissingKey, std::string("missing '") + key + "'", {key});
    return j.at(key).get<T>();
}

}  // namespace

// Records --------------------------------------------------------------------

ordered_json to_json(const ScenarioRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["spec"] = scenario::to_json(r.spec);
    auto& kcs = j["kcs"] = ordered_json::array();
    for (const auto& kc : r.kcs) kcs.push_back(to_json(kc));
    j["matrix"] = r.matrix ? scenario::to_json(*r.matrix) : ordered_json(nullptr);
    return j;
}

ScenarioRecord scenario_record_from_json(const json& j) {
    ScenarioRecord r;
    r.id = json_get<std::string>(j, "id");
    r.spec = scenario::spec_from_json(j.at("spec"));
    if (j.contains("kcs")) {
        for (const auto& kc : j.at("kcs")) r.kcs.push_back(knowledge_component_from_json(kc));
    }
    if (j.contains("matrix") && !j.at("matrix").is_null()) r.matrix = scenario::matrix_from_json(j.at("matrix"));
    return r;
}

ordered_json to_json(const dialogue::Turn& turn) {
    ordered_json j;
    j["index"] = turn.index;
    j["role"] = std::string(dialogue::to_string(turn.role));
    j["text"] = turn.text;
    if (turn.prompt_type) j["prompt_type"] = std::string(dialogue::to_string(*turn.prompt_type));
    if (turn.assessment) {
        j["assessment"] = {{"classification", std::string(dialogue::to_string(turn.assessment->classification))},
                           {"rationale", turn.assessment->rationale},
                           {"fallback", turn.assessment->fallback}};
    }
    j["timestamp"] = dialogue::format_timestamp(turn.timestamp);
    j["warnings"] = turn.warnings;
    return j;
}

dialogue::Turn turn_from_json(const json& j) {
    dialogue::Turn t;
    t.index = json_get<std::size_t>(j, "index");
    const auto role = json_get<std::string>(j, "role");
    if (role == "tutor") {
        t.role = dialogue::Speaker::Tutor;
    } else if (role == "learner") {
        t.role = dialogue::Speaker::Learner;
    } else {
        throw Error(Errc::InvalidValue, "unknown role '" + role + "'", {"role"});
    }
    t.text = json_get<std::string>(j, "text");
    if (j.contains("prompt_type") && !j.at("prompt_type").is_null()) {
        const auto name = j.at("prompt_type").get<std::string>();
        t.prompt_type = dialogue::parse_prompt_type(name);
        if (!t.prompt_type) throw Error(Errc::InvalidValue, "unknown prompt type '" + name + "'", {"prompt_type"});
    }
    if (j.contains("assessment") && !j.at("assessment").is_null()) {
        const auto& a = j.at("assessment");
        const auto label = json_get<std::string>(a, "classification");
        auto c = dialogue::parse_classification(label);
        if (!c) throw Error(Errc::InvalidValue, "unknown classification '" + label + "'", {"classification"});
        t.assessment = dialogue::Assessment{*c, a.value("rationale", std::string()), a.value("fallback", false)};
    }
    t.timestamp = dialogue::parse_timestamp(json_get<std::string>(j, "timestamp"));
    if (j.contains("warnings")) t.warnings = j.at("warnings").get<std::set<std::string>>();
    return t;
}

ordered_json transcript_header(const dialogue::DialogueSession& s) {
    ordered_json j;
    j["type"] = "header";
    j["version"] = kTranscriptVersion;
    j["id"] = s.id;
    j["spec"] = scenario::to_json(s.spec);
    j["kc"] = to_json(s.kc);
    j["wh_entry"] = {{"kc_index", s.wh_entry.kc_index},
                     {"wh", std::string(to_string(s.wh_entry.wh))},
                     {"question", s.wh_entry.question}};
    j["config"] = {{"max_turns", s.config.max_turns},
                   {"expected_answer", s.config.expected_answer},
                   {"policy_id", s.config.policy_id}};
    return j;
}

ordered_json transcript_turn(const dialogue::Turn& turn) {
    ordered_json j;
    j["type"] = "turn";
    const auto body = to_json(turn);
    for (const auto& [k, v] : body.items()) j[k] = v;
    return j;
}

ordered_json transcript_end(std::string_view summary) {
    return {{"type", "end"}, {"summary", std::string(summary)}};
}

// Store ----------------------------------------------------------------------

Store::Store(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    for (const auto* sub : {"scenarios", "sessions", "surveys/open"}) {
        fs::create_directories(root_ / sub, ec);
        if (ec) throw Error(Errc::IoError, "cannot create " + (root_ / sub).string() + ": " + ec.message());
    }
}

fs::path Store::scenario_path(std::string_view id) const {
    if (!is_valid_id(id)) throw Error(Errc::UnknownId, "unknown scenario '" + std::string(id) + "'");
    return root_ / "scenarios" / (std::string(id) + ".json");
}

fs::path Store::session_path(std::string_view id) const {
    if (!is_valid_id(id)) throw Error(Errc::UnknownSession, "unknown session '" + std::string(id) + "'");
    return root_ / "sessions" / (std::string(id) + ".jsonl");
}

fs::path Store::surveys_csv() const { return root_ / "surveys" / "responses.csv"; }

std::string Store::save_scenario(const scenario::ScenarioSpec& spec,
                                 const std::optional<scenario::ScenarioMatrix>& matrix) {
    ScenarioRecord r;
    r.id = new_id();
    r.spec = spec;
    if (matrix) r.kcs = matrix->kcs;
    r.matrix = matrix;
    std::lock_guard lock(mutex_);
    write_atomic(scenario_path(r.id), to_json(r).dump(2));
    return r.id;
}

void Store::put_scenario(const ScenarioRecord& record) {
    const auto path = scenario_path(record.id);
    std::lock_guard lock(mutex_);
    if (!fs::exists(path)) throw Error(Errc::UnknownId, "unknown scenario '" + record.id + "'");
    write_atomic(path, to_json(record).dump(2));
}

ScenarioRecord Store::load_scenario(std::string_view id) const {
    const auto path = scenario_path(id);
    if (!fs::exists(path)) throw Error(Errc::UnknownId, "unknown scenario '" + std::string(id) + "'");
    try {
        return scenario_record_from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptRecord, path.filename().string() + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::IoError) throw;
        throw Error(Errc::CorruptRecord, path.filename().string() + ": " + e.what());
    }
}

std::vector<std::string> Store::list_scenarios() const { return stems(root_ / "scenarios", ".json"); }

void Store::create_session(const dialogue::DialogueSession& session) {
    const auto path = session_path(session.id);
    if (fs::exists(path)) throw Error(Errc::InvalidArgument, "session '" + session.id + "' already exists");
    std::string content = transcript_header(session).dump() + "\n";
    for (const auto& t : session.turns) content += transcript_turn(t).dump() + "\n";
    if (session.state.status == dialogue::SessionStatus::Ended) content += transcript_end(session.summary).dump() + "\n";
    write_atomic(path, content);
}

void Store::append_turn(std::string_view session_id, const dialogue::Turn& turn) {
    const auto path = session_path(session_id);
    if (!fs::exists(path)) throw Error(Errc::UnknownSession, "unknown session '" + std::string(session_id) + "'");
    append_line(path, transcript_turn(turn).dump());
}

void Store::append_end(std::string_view session_id, std::string_view summary) {
    const auto path = session_path(session_id);
    if (!fs::exists(path)) throw Error(Errc::UnknownSession, "unknown session '" + std::string(session_id) + "'");
    append_line(path, transcript_end(summary).dump());
}

bool Store::has_session(std::string_view session_id) const {
    return is_valid_id(session_id) && fs::exists(session_path(session_id));
}

std::vector<std::string> Store::list_sessions() const { return stems(root_ / "sessions", ".jsonl"); }

dialogue::DialogueSession Store::load_session(std::string_view session_id) const {
    const auto path = session_path(session_id);
    if (!fs::exists(path)) throw Error(Errc::UnknownSession, "unknown session '" + std::string(session_id) + "'");
    const auto content = read_file(path);

    std::vector<json> records;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
        const auto nl = content.find('\n', pos);
        const bool terminated = nl != std::string::npos;
        const auto line = std::string_view(content).substr(pos, terminated ? nl - pos : std::string::npos);
        pos = terminated ? nl + 1 : content.size();
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::exception&) {
            if (!terminated) break;  // torn final write
            throw Error(Errc::CorruptRecord, path.filename().string() + ": bad line " + std::to_string(line_no));
        }
    }
    if (records.empty()) throw Error(Errc::CorruptRecord, path.filename().string() + ": empty transcript");

    dialogue::DialogueSession s;
    bool ended = false;
    try {
        const auto& h = records.front();
        if (h.value("type", "") != "header") throw Error(Errc::CorruptRecord, "first line is not a header");
        s.id = json_get<std::string>(h, "id");
        s.spec = scenario::spec_from_json(h.at("spec"));
        s.kc = knowledge_component_from_json(h.at("kc"));
        const auto& w = h.at("wh_entry");
        s.wh_entry.kc_index = json_get<std::size_t>(w, "kc_index");
        auto wh = parse_wh_type(json_get<std::string>(w, "wh"));
        if (!wh) throw Error(Errc::InvalidValue, "bad wh type");
        s.wh_entry.wh = *wh;
        s.wh_entry.question = json_get<std::string>(w, "question");
        const auto& c = h.at("config");
        s.config.max_turns = json_get<int>(c, "max_turns");
        s.config.expected_answer = c.value("expected_answer", std::string());
        s.config.policy_id = c.value("policy_id", std::string(dialogue::kDefaultPolicyId));

        for (std::size_t i = 1; i < records.size(); ++i) {
            const auto& r = records[i];
            const auto type = r.value("type", "");
            if (ended) throw Error(Errc::CorruptRecord, "record after the end line");
            if (type == "turn") {
                s.turns.push_back(turn_from_json(r));
            } else if (type == "end") {
                ended = true;
                s.summary = r.value("summary", std::string());
            } else {
                throw Error(Errc::CorruptRecord, "unknown record type '" + type + "'");
            }
        }
        dialogue::check_turn_sequence(s.turns);
    } catch (const json::exception& e) {
        throw Error(Errc::CorruptRecord, path.filename().string() + ": " + e.what());
    } catch (const Error& e) {
        if (e.code() == Errc::CorruptRecord) throw;
        throw Error(Errc::CorruptRecord, path.filename().string() + ": " + e.what());
    }
    if (s.id != session_id) throw Error(Errc::CorruptRecord, path.filename().string() + ": id mismatch");

    s.state = dialogue::replay_state(s.turns, s.config, ended);
    if (s.state.status == dialogue::SessionStatus::Ended && s.summary.empty()) {
        s.summary = dialogue::fallback_summary(s);
    }
    return s;
}

// Surveys --------------------------------------------------------------------

std::string survey_csv_header() {
    std::string h = "participant_id";
    for (int i = 1; i <= analytics::kQuestionCount; ++i) h += ",q" + std::to_string(i);
    return h;
}

std::string survey_csv_row(const analytics::SurveyResponse& r) {
    std::string row = csv_field(r.participant_id);
    for (int s : r.scores) row += "," + std::to_string(s);
    return row;
}

std::vector<analytics::SurveyResponse> parse_survey_csv(std::string_view csv) {
    std::vector<analytics::SurveyResponse> out;
    bool header_seen = false;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= csv.size()) {
        const auto nl = csv.find('\n', pos);
        const auto line = strip_cr(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
        pos = nl == std::string_view::npos ? csv.size() + 1 : nl + 1;
        ++line_no;
        if (text::trim(line).empty() || line.front() == '#') continue;
        const auto where = "survey line " + std::to_string(line_no);
        if (!header_seen) {
            if (text::trim(line) != survey_csv_header()) throw Error(Errc::CorruptRecord, where + ": unexpected header");
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 1 + analytics::kQuestionCount) {
            throw Error(Errc::CorruptRecord, where + ": expected " + std::to_string(1 + analytics::kQuestionCount) +
                                                 " fields, got " + std::to_string(fields.size()));
        }
        analytics::SurveyResponse r;
        r.participant_id = fields[0];
        for (int q = 0; q < analytics::kQuestionCount; ++q) {
            const auto f = text::trim(fields[static_cast<std::size_t>(q + 1)]);
            int v = 0;
            const auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || end != f.data() + f.size()) {
                throw Error(Errc::CorruptRecord, where + ": q" + std::to_string(q + 1) + " is not an integer");
            }
            r.scores[static_cast<std::size_t>(q)] = v;
        }
        r.validate();
        out.push_back(std::move(r));
    }
    return out;
}

std::string Store::save_survey(const analytics::SurveyResponse& response) {
    response.validate();
    std::lock_guard lock(mutex_);
    const auto csv = surveys_csv();
    std::size_t row = 0;
    if (fs::exists(csv)) {
        row = parse_survey_csv(read_file(csv)).size();
    } else {
        append_line(csv, survey_csv_header());
    }
    const auto id = new_id();
    ordered_json sidecar{{"id", id},
                         {"participant_id", response.participant_id},
                         {"row", row},
                         {"q11", response.q11},
                         {"q12", response.q12}};
    write_atomic(root_ / "surveys" / "open" / (id + ".json"), sidecar.dump(2));
    append_line(csv, survey_csv_row(response));
    return id;
}

std::vector<analytics::SurveyResponse> Store::load_surveys() const {
    std::lock_guard lock(mutex_);
    const auto csv = surveys_csv();
    if (!fs::exists(csv)) return {};
    auto responses = parse_survey_csv(read_file(csv));

    std::map<std::size_t, json> sidecars;
    for (const auto& id : stems(root_ / "surveys" / "open", ".json")) {
        try {
            auto j = json::parse(read_file(root_ / "surveys" / "open" / (id + ".json")));
            const auto row = j.at("row").get<std::size_t>();
            sidecars[row] = std::move(j);
        } catch (const json::exception& e) {
            throw Error(Errc::CorruptRecord, "survey sidecar " + id + ": " + e.what());
        }
    }
    for (std::size_t i = 0; i < responses.size(); ++i) {
        auto& r = responses[i];
        auto it = sidecars.find(i);
        if (it == sidecars.end()) {
            r.id = "row-" + std::to_string(i + 1);
            continue;
        }
        r.id = it->second.value("id", "row-" + std::to_string(i + 1));
        r.q11 = it->second.value("q11", std::string());
        r.q12 = it->second.value("q12", std::string());
    }
    return responses;
}

}  // namespace socratic::store
