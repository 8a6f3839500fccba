#include "socratic/dialogue/types.hpp"

#include <algorithm>
#include <cstdio>

#include "socratic/error.hpp"
#include "socratic/text.hpp"

namespace socratic::dialogue {

namespace {

constexpr std::array<PromptTypeInfo, kPromptTypeCount> kPromptTypes{{
    {PromptType::InitialContextAndQuestioning, "InitialContextAndQuestioning", "Initial Context and Questioning",
     "Open with a short scenario context and pose a wh-question about it.",
     "What aspect of the context do you find most challenging to understand?"},
    {PromptType::ResponseEvaluationAndFeedback, "ResponseEvaluationAndFeedback", "Response Evaluation and Feedback",
     "Judge the answer and steer toward a correct understanding with hints, never the answer itself.",
     "How does this part of the context relate to the overall scenario?"},
    {PromptType::IterativePrompting, "IterativePrompting", "Iterative Prompting",
     "Push the learner's reasoning further and ask them to articulate details.",
     "Can you explain why this particular detail is significant in the scenario?"},
    {PromptType::FeedbackAndExploration, "FeedbackAndExploration", "Feedback and Exploration",
     "Point out what is right so far and hint at what is still worth exploring.",
     "What other factors might influence this outcome?"},
    {PromptType::MaintainingEngagement, "MaintainingEngagement", "Maintaining Engagement",
     "Keep momentum with a question linking the new idea to what the learner already knows.",
     "How would you connect this concept to what you have learned previously?"},
    {PromptType::FosteringCriticalThinking, "FosteringCriticalThinking", "Fostering Critical Thinking",
     "Ask the learner to evaluate and critique their own answer.",
     "What could be a potential limitation of your current understanding?"},
    {PromptType::EncouragingReflection, "EncouragingReflection", "Encouraging Reflection",
     "Invite the learner to look back on how their thinking has developed.",
     "How has your understanding changed after considering this question?"},
    {PromptType::ProvidingIncrementalHints, "ProvidingIncrementalHints", "Providing Incremental Hints",
     "Give a small hint that builds on earlier hints and simplifies the next step.",
     "What is a simpler way to think about this problem before tackling the more complex aspects?"},
    {PromptType::AdaptiveFeedback, "AdaptiveFeedback", "Adaptive Feedback",
     "Tailor the feedback to the learner's improved answer and make it more specific.",
     "Given your explanation, what would be the next logical step to explore?"},
    {PromptType::EncouragingSynthesis, "EncouragingSynthesis", "Encouraging Synthesis",
     "Ask the learner to combine ideas from across the scenario into one explanation.",
     "How can you combine these different pieces of information to solve the problem?"},
}};

void apply_assessment(SessionState& state, Classification c) {
    switch (c) {
        case Classification::Correct:
            ++state.correct_streak;
            state.partial_streak = 0;
            state.hint_depth = 0;
            break;
        case Classification::Partial:
            state.correct_streak = 0;
            ++state.partial_streak;
            break;
        case Classification::Incorrect:
        case Classification::OffTopic:
            state.correct_streak = 0;
            state.partial_streak = 0;
            ++state.hint_depth;
            break;
    }
}

}  // namespace

const std::array<PromptTypeInfo, kPromptTypeCount>& prompt_types() { return kPromptTypes; }

const PromptTypeInfo& info(PromptType type) { return kPromptTypes[static_cast<std::size_t>(type)]; }

std::string_view to_string(PromptType type) noexcept { return kPromptTypes[static_cast<std::size_t>(type)].id; }

std::optional<PromptType> parse_prompt_type(std::string_view s) {
    for (const auto& row : kPromptTypes) {
        if (text::iequals(s, row.id) || text::iequals(s, row.title)) return row.type;
    }
    return std::nullopt;
}

std::string_view to_string(Classification c) noexcept {
    switch (c) {
        case Classification::Correct: return "Correct";
        case Classification::Partial: return "Partial";
        case Classification::Incorrect: return "Incorrect";
        case Classification::OffTopic: return "OffTopic";
    }
    return "Partial";
}

std::optional<Classification> parse_classification(std::string_view s) {
    std::string key;
    for (char c : text::to_lower(text::trim(s))) {
        if (c != '-' && c != '_' && c != ' ') key.push_back(c);
    }
    if (key == "correct") return Classification::Correct;
    if (key == "partial" || key == "partiallycorrect") return Classification::Partial;
    if (key == "incorrect") return Classification::Incorrect;
    if (key == "offtopic") return Classification::OffTopic;
    return std::nullopt;
}

std::string_view to_string(Speaker s) noexcept { return s == Speaker::Tutor ? "tutor" : "learner"; }

Timestamp now() {
    return std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss<milliseconds> hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()), static_cast<int>(hms.subseconds().count()));
    return buf;
}

Timestamp parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0;
    unsigned d = 0;
    int h = 0;
    int mi = 0;
    int sec = 0;
    int ms = 0;
    char z = 0;
    const std::string str(s);
    if (std::sscanf(str.c_str(), "%4d-%2u-%2uT%2d:%2d:%2d.%3d%c", &y, &mo, &d, &h, &mi, &sec, &ms, &z) != 8 ||
        z != 'Z') {
        throw Error(Errc::InvalidValue, "bad timestamp '" + str + "'");
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok()) throw Error(Errc::InvalidValue, "bad date in timestamp '" + str + "'");
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{sec} + milliseconds{ms};
}

std::size_t DialogueSession::tutor_turns() const {
    return static_cast<std::size_t>(
        std::count_if(turns.begin(), turns.end(), [](const Turn& t) { return t.role == Speaker::Tutor; }));
}

void apply_turn(SessionState& state, const Turn& turn, const SessionConfig& config) {
    ++state.turn_count;
    if (turn.role == Speaker::Learner) {
        if (turn.assessment) apply_assessment(state, turn.assessment->classification);
        return;
    }
    if (auto wh = find_wh_word(text::last_sentence(turn.text))) state.wh_coverage.insert(*wh);
    const auto tutor_count = (state.turn_count + 1) / 2;
    if (config.max_turns > 0 && tutor_count >= static_cast<std::size_t>(config.max_turns)) {
        state.status = SessionStatus::Ended;
    }
}

SessionState replay_state(const std::vector<Turn>& turns, const SessionConfig& config, bool ended) {
    SessionState state;
    for (const auto& t : turns) apply_turn(state, t, config);
    if (ended) state.status = SessionStatus::Ended;
    return state;
}

void check_turn_sequence(const std::vector<Turn>& turns) {
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const auto& t = turns[i];
        if (t.index != i) {
            throw Error(Errc::InvalidValue, "turn at position " + std::to_string(i) + " has index " +
                                                std::to_string(t.index));
        }
        const Speaker expected = i % 2 == 0 ? Speaker::Tutor : Speaker::Learner;
        if (t.role != expected) {
            throw Error(Errc::InvalidValue, "turn " + std::to_string(i) + " breaks tutor/learner alternation");
        }
        if (t.role == Speaker::Tutor && !t.prompt_type) {
            throw Error(Errc::InvalidValue, "tutor turn " + std::to_string(i) + " has no prompt type");
        }
        if (t.role == Speaker::Learner && t.prompt_type) {
            throw Error(Errc::InvalidValue, "learner turn " + std::to_string(i) + " carries a prompt type");
        }
    }
}

}  // namespace socratic::dialogue
