#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socratic/analytics/survey.hpp"
#include "socratic/dialogue/types.hpp"
#include "socratic/scenario/matrix.hpp"
#include "socratic/scenario/scenario_spec.hpp"

namespace socratic::store {

struct ScenarioRecord {
    std::string id;
    scenario::ScenarioSpec spec;
    std::vector<KnowledgeComponent> kcs;
    std::optional<scenario::ScenarioMatrix> matrix;

    bool operator==(const ScenarioRecord&) const = default;
};

nlohmann::ordered_json to_json(const ScenarioRecord& r);
ScenarioRecord scenario_record_from_json(const nlohmann::json& j);

/// Transcript line encodings. A transcript is a header line, one line per
/// turn and, once the session ends, a closing "end" line.
nlohmann::ordered_json transcript_header(const dialogue::DialogueSession& session);
nlohmann::ordered_json transcript_turn(const dialogue::Turn& turn);
nlohmann::ordered_json transcript_end(std::string_view summary);
nlohmann::ordered_json to_json(const dialogue::Turn& turn);
dialogue::Turn turn_from_json(const nlohmann::json& j);

/// File-backed store rooted at a directory:
///   scenarios/<id>.json
///   sessions/<id>.jsonl
///   surveys/responses.csv, surveys/open/<id>.json
/// Scenario and survey writes are serialized by a store-wide lock. Each
/// session transcript has one writer at a time; that is the caller's job.
class Store {
public:
    /// Creates the directory layout if needed and indexes existing records.
    explicit Store(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }

    // Scenarios -------------------------------------------------------------

    /// Writes a new scenario document atomically and returns its id.
    std::string save_scenario(const scenario::ScenarioSpec& spec,
                              const std::optional<scenario::ScenarioMatrix>& matrix = std::nullopt);
    /// Atomically replaces an existing scenario. Throws Error(UnknownId).
    void put_scenario(const ScenarioRecord& record);
    /// Throws Error(UnknownId) / Error(CorruptRecord).
    ScenarioRecord load_scenario(std::string_view id) const;
    std::vector<std::string> list_scenarios() const;

    // Sessions --------------------------------------------------------------

    /// Starts a transcript holding the header and any turns already present.
    void create_session(const dialogue::DialogueSession& session);
    /// Appends one turn line and flushes it before returning.
    /// Throws Error(UnknownSession) / Error(IoError).
    void append_turn(std::string_view session_id, const dialogue::Turn& turn);
    void append_end(std::string_view session_id, std::string_view summary);
    /// Rebuilds the session by replaying its turns. A trailing partial line is
    /// ignored. Throws Error(UnknownSession) / Error(CorruptRecord).
    dialogue::DialogueSession load_session(std::string_view session_id) const;
    std::vector<std::string> list_sessions() const;
    bool has_session(std::string_view session_id) const;
    std::filesystem::path session_path(std::string_view session_id) const;

    // Surveys ---------------------------------------------------------------

    /// Validates, appends a CSV row and writes the open-text sidecar. Returns the response id.
    /// Throws Error(OutOfRange) for a score outside 1..7.
    std::string save_survey(const analytics::SurveyResponse& response);
    /// Every stored response, in insertion order.
    std::vector<analytics::SurveyResponse> load_surveys() const;

private:
    std::filesystem::path scenario_path(std::string_view id) const;
    std::filesystem::path surveys_csv() const;

    std::filesystem::path root_;
    mutable std::mutex mutex_;
};

/// Reads `surveys/responses.csv`-format text. Lines starting with '#' are
/// comments. Throws Error(CorruptRecord) / Error(OutOfRange).
std::vector<analytics::SurveyResponse> parse_survey_csv(std::string_view csv);
std::string survey_csv_header();
std::string survey_csv_row(const analytics::SurveyResponse& r);

}  // namespace socratic::store
