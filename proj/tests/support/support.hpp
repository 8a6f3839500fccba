#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "socratic/dialogue/types.hpp"
#include "socratic/knowledge_component.hpp"
#include "socratic/llm/scripted_provider.hpp"
#include "socratic/scenario/scenario_spec.hpp"

namespace socratic::testing {

std::filesystem::path fixture(const std::string& name);
std::string read_file(const std::filesystem::path& path);

/// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

scenario::ScenarioSpec sample_spec();
KnowledgeComponent sample_kc();

/// A good tutor reply for the tests' own validity oracle.
inline constexpr const char* kGoodTutorReply = "That is a fair start. Why does the reward come right after the post?";

/// Matchers for each kind of provider request made by the dialogue engine.
namespace match {
inline constexpr const char* kContext = "Write a short scenario context";
inline constexpr const char* kOpening = "opens a Socratic dialogue";
inline constexpr const char* kAssessment = "Classify the latest learner response";
inline constexpr const char* kAssessmentRepair = "Reply with only a json object";
inline constexpr const char* kTutor = "Compose the next tutor turn";
inline constexpr const char* kTutorRepair = "Rewrite the turn";
inline constexpr const char* kSummary = "Summarize this Socratic tutoring session";
}  // namespace match

/// A randomly generated but fully scripted session: every provider call the
/// engine will make has exactly one entry. Replies are a mix of compliant and
/// broken output so regeneration, patching and fallbacks all get exercised.
struct SessionPlan {
    std::vector<llm::ScriptEntry> script;
    std::vector<std::string> learner_lines;
    std::string opening_question;
    WhType wh = WhType::What;
    dialogue::SessionConfig config;
    bool explicit_end = true;  // false when max_turns ends the session first
};

SessionPlan plan_session(std::uint64_t seed, int learner_turns, const std::string& expected_answer);

/// Independent checks used as oracles by the dialogue tests.
bool oracle_has_wh_word(const std::string& sentence);
std::string oracle_last_sentence(const std::string& text);

}  // namespace socratic::testing
