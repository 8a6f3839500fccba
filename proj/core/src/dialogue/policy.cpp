#include "socratic/dialogue/policy.hpp"

#include "socratic/error.hpp"

namespace socratic::dialogue {

PromptType SocraticPolicy::select(const PolicyInput& input, Classification c) const {
    const std::size_t ordinal = input.tutor_turn_index / 2;
    if (ordinal % 4 == 3) return PromptType::EncouragingReflection;
    if (ordinal % 6 == 5) return PromptType::FosteringCriticalThinking;

    switch (c) {
        case Classification::Incorrect:
        case Classification::OffTopic:
            return PromptType::ProvidingIncrementalHints;
        case Classification::Partial:
            return (input.partial_streak + 1) % 3 == 0 ? PromptType::FeedbackAndExploration
                                                       : PromptType::IterativePrompting;
        case Classification::Correct: {
            const int streak = input.correct_streak + 1;
            if (streak == 1) {
                return input.hint_depth > 0 ? PromptType::AdaptiveFeedback : PromptType::ResponseEvaluationAndFeedback;
            }
            return streak == 2 ? PromptType::MaintainingEngagement : PromptType::EncouragingSynthesis;
        }
    }
    return PromptType::IterativePrompting;
}

const DialoguePolicy& policy_for(std::string_view id) {
    static const SocraticPolicy socratic;
    if (id.empty() || id == socratic.id()) return socratic;
    throw Error(Errc::InvalidArgument, "unknown dialogue policy '" + std::string(id) + "'");
}

PromptType select_prompt_type(const PolicyInput& input, Classification c) {
    return policy_for(kDefaultPolicyId).select(input, c);
}

PolicyInput policy_input(const SessionState& state) {
    return {state.correct_streak, state.partial_streak, state.hint_depth, state.turn_count + 1};
}

PromptType select_prompt_type(const SessionState& state, const Assessment& assessment) {
    return select_prompt_type(policy_input(state), assessment.classification);
}

}  // namespace socratic::dialogue
