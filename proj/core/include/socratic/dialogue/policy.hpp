#pragma once

#include <cstddef>
#include <string_view>

#include "socratic/dialogue/types.hpp"

namespace socratic::dialogue {

/// What the policy sees before the learner's latest assessment is applied.
struct PolicyInput {
    int correct_streak = 0;
    int partial_streak = 0;
    int hint_depth = 0;
    std::size_t tutor_turn_index = 0;  // transcript index of the turn being composed
};

/// Chooses the next tutor move. Must be a pure function of its arguments.
class DialoguePolicy {
public:
    virtual ~DialoguePolicy() = default;
    virtual std::string_view id() const noexcept = 0;
    virtual PromptType select(const PolicyInput& input, Classification c) const = 0;
};

/// Default Socratic policy:
///   Incorrect / OffTopic  -> ProvidingIncrementalHints
///   Partial               -> IterativePrompting; every third consecutive one FeedbackAndExploration
///   Correct, streak 1     -> ResponseEvaluationAndFeedback (AdaptiveFeedback when hint_depth > 0)
///   Correct, streak 2     -> MaintainingEngagement
///   Correct, streak >= 3  -> EncouragingSynthesis
/// Overrides by tutor ordinal k = index / 2: k % 4 == 3 -> EncouragingReflection,
/// else k % 6 == 5 -> FosteringCriticalThinking.
class SocraticPolicy final : public DialoguePolicy {
public:
    std::string_view id() const noexcept override { return kDefaultPolicyId; }
    PromptType select(const PolicyInput& input, Classification c) const override;
};

/// Throws Error(InvalidArgument) for an unknown id.
const DialoguePolicy& policy_for(std::string_view id);

PromptType select_prompt_type(const PolicyInput& input, Classification c);

/// `state` is the session state right after the last tutor turn; the turn being
/// composed will sit at index state.turn_count + 1.
PromptType select_prompt_type(const SessionState& state, const Assessment& assessment);

PolicyInput policy_input(const SessionState& state);

}  // namespace socratic::dialogue
