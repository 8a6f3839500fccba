#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "socratic/dialogue/policy.hpp"
#include "socratic/dialogue/types.hpp"
#include "socratic/llm/provider.hpp"
#include "socratic/prompt/template.hpp"

namespace socratic::dialogue {

/// A tutor turn must end with exactly one question, the final sentence must
/// carry a wh-word, and it must open with a non-question feedback sentence.
bool is_valid_tutor_turn(std::string_view text);

/// Deterministic last-resort repair: keeps the non-question sentences that do
/// not reveal `expected_answer` and appends the example question for `type`.
std::string patch_tutor_turn(std::string_view text, PromptType type, std::string_view expected_answer);

/// Presents a scenario context followed by the opening wh-question. An empty or
/// invalid `opening_question` is regenerated through the provider.
DialogueSession start_session(const scenario::ScenarioSpec& spec, const KnowledgeComponent& kc,
                              WhType wh_type, std::string opening_question, llm::Provider& provider,
                              SessionConfig config = {}, std::size_t kc_index = 0,
                              const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Classifies the learner's answer to the last tutor turn. Blank input is
/// OffTopic without a model call; unusable model output falls back to Partial.
Assessment assess_response(const DialogueSession& session, std::string_view learner_text,
                           llm::Provider& provider,
                           const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Builds the next tutor turn: feedback on the learner, then one wh-question.
/// `session` must already hold the learner turn being answered.
Turn compose_tutor_turn(const DialogueSession& session, const Assessment& assessment, PromptType type,
                        llm::Provider& provider,
                        const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Appends the learner turn and the tutor reply. On any error the session is
/// left untouched. Throws Error(SessionEnded) / Error(InvalidArgument).
std::pair<Turn, Turn> submit_response(DialogueSession& session, std::string_view learner_text,
                                      llm::Provider& provider,
                                      const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Ends the session and returns its summary. Provider failures fall back to a
/// template summary. Throws Error(SessionEnded) if already ended.
std::string end_session(DialogueSession& session, llm::Provider& provider,
                        const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Summary built from the transcript alone.
std::string fallback_summary(const DialogueSession& session);

}  // namespace socratic::dialogue
