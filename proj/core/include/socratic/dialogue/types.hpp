#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "socratic/knowledge_component.hpp"
#include "socratic/scenario/scenario_spec.hpp"
#include "socratic/wh.hpp"

namespace socratic::dialogue {

/// Tutor moves, in the order of the Socratic prompt table.
enum class PromptType {
    InitialContextAndQuestioning,
    ResponseEvaluationAndFeedback,
    IterativePrompting,
    FeedbackAndExploration,
    MaintainingEngagement,
    FosteringCriticalThinking,
    EncouragingReflection,
    ProvidingIncrementalHints,
    AdaptiveFeedback,
    EncouragingSynthesis,
};

inline constexpr std::size_t kPromptTypeCount = 10;

struct PromptTypeInfo {
    PromptType type;
    std::string_view id;           // stable identifier, e.g. "IterativePrompting"
    std::string_view title;        // human-readable row title
    std::string_view description;  // what the move does
    std::string_view example_question;
};

const std::array<PromptTypeInfo, kPromptTypeCount>& prompt_types();
const PromptTypeInfo& info(PromptType type);
std::string_view to_string(PromptType type) noexcept;
std::optional<PromptType> parse_prompt_type(std::string_view s);

enum class Classification { Correct, Partial, Incorrect, OffTopic };

std::string_view to_string(Classification c) noexcept;
/// Case-insensitive; accepts "off-topic", "off_topic", "offtopic".
std::optional<Classification> parse_classification(std::string_view s);

struct Assessment {
    Classification classification = Classification::Partial;
    std::string rationale;
    bool fallback = false;  // model output unusable; classification defaulted

    bool operator==(const Assessment&) const = default;
};

enum class Speaker { Tutor, Learner };

std::string_view to_string(Speaker s) noexcept;

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

Timestamp now();
std::string format_timestamp(Timestamp t);
/// Parses "YYYY-MM-DDTHH:MM:SS.mmmZ". Throws Error(InvalidValue).
Timestamp parse_timestamp(std::string_view s);

namespace turn_warning {
inline constexpr std::string_view kPatched = "patched";
inline constexpr std::string_view kRegenerated = "regenerated";
inline constexpr std::string_view kAssessmentFallback = "assessment_fallback";
inline constexpr std::string_view kPedagogyStub = "pedagogy_stub";
}  // namespace turn_warning

struct Turn {
    std::size_t index = 0;
    Speaker role = Speaker::Tutor;
    std::string text;
    std::optional<PromptType> prompt_type;  // tutor turns only
    std::optional<Assessment> assessment;   // learner turns, once evaluated
    Timestamp timestamp{};
    std::set<std::string> warnings;

    bool operator==(const Turn&) const = default;
};

enum class SessionStatus { Active, Ended };

struct SessionState {
    int correct_streak = 0;
    int partial_streak = 0;  // consecutive Partial assessments
    int hint_depth = 0;
    std::set<WhType> wh_coverage;
    std::size_t turn_count = 0;
    SessionStatus status = SessionStatus::Active;

    bool operator==(const SessionState&) const = default;
};

inline constexpr int kDefaultMaxTurns = 30;
inline constexpr std::string_view kDefaultPolicyId = "socratic-default";

struct SessionConfig {
    int max_turns = kDefaultMaxTurns;  // tutor turns before the session auto-ends
    std::string expected_answer;       // never echoed by the tutor when non-empty
    std::string policy_id{kDefaultPolicyId};

    bool operator==(const SessionConfig&) const = default;
};

/// The matrix cell a session was opened from.
struct WhEntry {
    std::size_t kc_index = 0;
    WhType wh = WhType::What;
    std::string question;

    bool operator==(const WhEntry&) const = default;
};

struct DialogueSession {
    std::string id;
    scenario::ScenarioSpec spec;
    KnowledgeComponent kc;
    WhEntry wh_entry;
    SessionConfig config;
    std::vector<Turn> turns;
    SessionState state;
    std::string summary;  // set once the session ends

    std::size_t tutor_turns() const;
    bool operator==(const DialogueSession&) const = default;
};

/// Applies one appended turn to `state`. Live execution and transcript replay
/// both go through this function.
void apply_turn(SessionState& state, const Turn& turn, const SessionConfig& config);

/// State reconstructed from scratch by applying every turn in order.
SessionState replay_state(const std::vector<Turn>& turns, const SessionConfig& config, bool ended);

/// Throws Error(InvalidValue) describing the first broken invariant: tutor-first
/// alternation, contiguous indices, prompt types on tutor turns only.
void check_turn_sequence(const std::vector<Turn>& turns);

}  // namespace socratic::dialogue
