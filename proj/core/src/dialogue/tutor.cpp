#include "socratic/dialogue/tutor.hpp"

#include <algorithm>

#include "socratic/error.hpp"
#include "socratic/id.hpp"
#include "socratic/prompt/json_extract.hpp"
#include "socratic/scenario/matrix.hpp"
#include "socratic/text.hpp"

namespace socratic::dialogue {

namespace {

using llm::ChatRequest;
using llm::Role;
using prompt::VariableSet;

const std::string kTutorSystem =
    "You are a Socratic tutor. Guide the learner with questions and hints; never hand over the answer.";
const std::string kAssessorSystem = "You grade learner answers in a tutoring dialogue. Reply with JSON only.";
const std::string kGenericFeedback = "Thank you for sharing your thinking.";

std::string non_blank(const std::string& preferred, const std::string& fallback) {
    auto v = text::trim(preferred);
    return v.empty() ? text::trim(fallback) : v;
}

void set_or_na(VariableSet& vars, const std::string& name, const std::string& value, std::string_view placeholder = "n/a") {
    auto v = text::trim(value);
    vars.set(name, v.empty() ? std::string(placeholder) : v);
}

// Spec bindings with the session's knowledge component taking precedence.
VariableSet session_variables(const scenario::ScenarioSpec& spec, const KnowledgeComponent& kc) {
    VariableSet vars = spec.variables();
    set_or_na(vars, "theKC", non_blank(kc.theKC, spec.theKC));
    set_or_na(vars, "theContext", non_blank(kc.theContext, spec.theContext));
    set_or_na(vars, "theObjective", non_blank(kc.theObjective, spec.theObjective));
    return vars;
}

std::string history_text(const std::vector<Turn>& turns) {
    std::string out;
    for (const auto& t : turns) {
        out += t.role == Speaker::Tutor ? "Tutor: " : "Learner: ";
        out += t.text.empty() ? std::string("(no answer)") : t.text;
        out += '\n';
    }
    return out.empty() ? std::string("(no dialogue yet)") : out;
}

bool leaks(std::string_view s, std::string_view expected_answer) {
    auto needle = text::trim(expected_answer);
    return !needle.empty() && text::icontains(s, needle);
}

std::string complete_text(llm::Provider& provider, const ChatRequest& req) {
    return text::collapse_whitespace(provider.complete(req).text);
}

ChatRequest with_repair(const ChatRequest& original, const std::string& reply, std::string instruction) {
    ChatRequest req = original;
    req.messages.push_back({Role::Assistant, reply.empty() ? std::string("(empty reply)") : reply});
    req.messages.push_back({Role::User, std::move(instruction)});
    return req;
}

std::string fallback_opening_question(WhType wh, const std::string& kc) {
    switch (wh) {
        case WhType::What: return std::string(info(PromptType::InitialContextAndQuestioning).example_question);
        case WhType::Why: return "Why do you think " + kc + " matters in this scenario?";
        case WhType::How: return "How would you explain " + kc + " in your own words?";
        case WhType::Who: return "Who in this scenario is most affected by " + kc + "?";
        case WhType::When: return "When might " + kc + " become important in this scenario?";
    }
    return std::string(info(PromptType::InitialContextAndQuestioning).example_question);
}

// Context sentences only: questions and answer reveals are dropped.
std::string clean_context(const std::string& reply, std::string_view expected_answer) {
    std::vector<std::string> kept;
    for (auto& s : text::split_sentences(reply)) {
        if (s.find('?') == std::string::npos && !leaks(s, expected_answer)) kept.push_back(std::move(s));
    }
    return text::join(kept, " ");
}

std::optional<Assessment> parse_assessment(const std::string& reply) {
    for (const auto& obj : prompt::find_json_objects(reply)) {
        auto label = obj.get_string("classification");
        if (!label) continue;
        auto c = parse_classification(*label);
        if (!c) continue;
        Assessment a;
        a.classification = *c;
        a.rationale = text::collapse_whitespace(obj.get_string("rationale").value_or(""));
        if (a.rationale.empty()) a.rationale = "no rationale given";
        return a;
    }
    return std::nullopt;
}

std::string coverage_text(const SessionState& state) {
    std::vector<std::string> names;
    for (auto wh : state.wh_coverage) names.emplace_back(to_string(wh));
    return names.empty() ? std::string("none") : text::join(names, ", ");
}

}  // namespace

bool is_valid_tutor_turn(std::string_view raw) {
    const auto s = text::trim(raw);
    if (s.empty() || s.back() != '?') return false;
    if (std::count(s.begin(), s.end(), '?') != 1) return false;
    const auto sentences = text::split_sentences(s);
    if (sentences.size() < 2) return false;
    return find_wh_word(sentences.back()).has_value();
}

std::string patch_tutor_turn(std::string_view raw, PromptType type, std::string_view expected_answer) {
    std::vector<std::string> kept;
    for (auto& s : text::split_sentences(text::collapse_whitespace(raw))) {
        if (s.find('?') == std::string::npos && !leaks(s, expected_answer)) kept.push_back(std::move(s));
    }
    std::string feedback = kept.empty() ? kGenericFeedback : text::join(kept, " ");
    return feedback + " " + std::string(info(type).example_question);
}

DialogueSession start_session(const scenario::ScenarioSpec& spec, const KnowledgeComponent& kc, WhType wh_type,
                              std::string opening_question, llm::Provider& provider, SessionConfig config,
                              std::size_t kc_index, const prompt::TemplateLibrary& templates) {
    spec.validate();
    if (config.max_turns < 1) throw Error(Errc::InvalidValue, "max_turns must be at least 1", {"max_turns"});
    policy_for(config.policy_id);

    const VariableSet vars = session_variables(spec, kc);
    const std::string kc_name = *vars.find("theKC");
    std::set<std::string> warnings;
    if (spec.theType != scenario::Pedagogy::Socratic) warnings.emplace(turn_warning::kPedagogyStub);

    std::string question = text::collapse_whitespace(opening_question);
    if (!scenario::is_valid_cell_question(question, wh_type) || leaks(question, config.expected_answer)) {
        VariableSet qvars = vars;
        qvars.set("theWh", std::string(to_string(wh_type)));
        auto prompt = prompt::render(templates.get(prompt::template_id::kOpeningQuestion), qvars);
        question = text::last_sentence(
            complete_text(provider, llm::make_request(kTutorSystem, prompt.text, llm::kDialogueTemperature)));
        warnings.emplace(turn_warning::kRegenerated);
        if (!scenario::is_valid_cell_question(question, wh_type) || leaks(question, config.expected_answer)) {
            question = fallback_opening_question(wh_type, kc_name);
            warnings.emplace(turn_warning::kPatched);
        }
    }

    auto context_prompt = prompt::render(templates.get(prompt::template_id::kSessionContext), vars);
    std::string context = clean_context(
        complete_text(provider, llm::make_request(kTutorSystem, context_prompt.text, llm::kDialogueTemperature)),
        config.expected_answer);
    if (context.empty()) context = "Let's explore " + kc_name + " in the context of " + *vars.find("theContext") + ".";

    DialogueSession session;
    session.id = new_id();
    session.spec = spec;
    session.kc = kc;
    session.wh_entry = {kc_index, wh_type, question};
    session.config = std::move(config);

    Turn opening;
    opening.index = 0;
    opening.role = Speaker::Tutor;
    opening.text = context + " " + question;
    opening.prompt_type = PromptType::InitialContextAndQuestioning;
    opening.timestamp = now();
    opening.warnings = std::move(warnings);
    session.turns.push_back(opening);
    apply_turn(session.state, opening, session.config);
    if (session.state.status == SessionStatus::Ended) session.summary = fallback_summary(session);
    return session;
}

Assessment assess_response(const DialogueSession& session, std::string_view learner_text, llm::Provider& provider,
                           const prompt::TemplateLibrary& templates) {
    const auto answer = text::trim(learner_text);
    if (answer.empty()) return {Classification::OffTopic, "empty response", false};

    VariableSet vars = session_variables(session.spec, session.kc);
    vars.set("theHistory", history_text(session.turns));
    vars.set("theResponse", answer);
    auto prompt = prompt::render(templates.get(prompt::template_id::kAssessment), vars);
    auto req = llm::make_request(kAssessorSystem, prompt.text, llm::kExtractionTemperature);

    auto reply = provider.complete(req).text;
    if (auto a = parse_assessment(reply)) return *a;
    reply = provider
                .complete(with_repair(req, reply,
                                      "Reply with only a json object of the form "
                                      "{\"classification\": \"Correct|Partial|Incorrect|OffTopic\", "
                                      "\"rationale\": \"...\"}."))
                .text;
    if (auto a = parse_assessment(reply)) return *a;
    return {Classification::Partial, "assessment unavailable", true};
}

Turn compose_tutor_turn(const DialogueSession& session, const Assessment& assessment, PromptType type,
                        llm::Provider& provider, const prompt::TemplateLibrary& templates) {
    const auto& move = info(type);
    VariableSet vars = session_variables(session.spec, session.kc);
    vars.set("theHistory", history_text(session.turns));
    vars.set("theClassification", std::string(to_string(assessment.classification)));
    set_or_na(vars, "theRationale", assessment.rationale);
    vars.set("thePromptType", std::string(move.title));
    vars.set("theMoveDescription", std::string(move.description));
    vars.set("theExampleQuestion", std::string(move.example_question));
    auto prompt = prompt::render(templates.get(prompt::template_id::kTutorTurn), vars);
    std::string user = prompt.text;
    const auto expected = text::trim(session.config.expected_answer);
    if (!expected.empty()) user += "\nNever write this phrase in your turn: " + expected;
    const auto req = llm::make_request(kTutorSystem, user, llm::kDialogueTemperature);

    Turn turn;
    turn.index = session.turns.size();
    turn.role = Speaker::Tutor;
    turn.prompt_type = type;

    auto ok = [&](const std::string& s) { return is_valid_tutor_turn(s) && !leaks(s, expected); };
    std::string reply = complete_text(provider, req);
    if (!ok(reply)) {
        turn.warnings.emplace(turn_warning::kRegenerated);
        reply = complete_text(
            provider, with_repair(req, reply,
                                  "Rewrite the turn. Open with one sentence of feedback, then end with exactly one "
                                  "what, why, how, who or when question and no other question mark. "
                                  "Do not reveal the answer."));
        if (!ok(reply)) {
            reply = patch_tutor_turn(reply, type, expected);
            turn.warnings.emplace(turn_warning::kPatched);
        }
    }
    turn.text = std::move(reply);
    turn.timestamp = now();
    return turn;
}

std::pair<Turn, Turn> submit_response(DialogueSession& session, std::string_view learner_text,
                                      llm::Provider& provider, const prompt::TemplateLibrary& templates) {
    if (session.state.status == SessionStatus::Ended) throw Error(Errc::SessionEnded, "session has ended");
    if (session.turns.empty() || session.turns.back().role != Speaker::Tutor) {
        throw Error(Errc::InvalidArgument, "the session is not waiting for a learner response");
    }

    DialogueSession next = session;
    const auto assessment = assess_response(next, learner_text, provider, templates);
    const auto type = policy_for(next.config.policy_id).select(policy_input(next.state), assessment.classification);

    Turn learner;
    learner.index = next.turns.size();
    learner.role = Speaker::Learner;
    learner.text = text::trim(learner_text);
    learner.assessment = assessment;
    learner.timestamp = now();
    if (assessment.fallback) learner.warnings.emplace(turn_warning::kAssessmentFallback);
    next.turns.push_back(learner);
    apply_turn(next.state, learner, next.config);

    Turn tutor = compose_tutor_turn(next, assessment, type, provider, templates);
    next.turns.push_back(tutor);
    apply_turn(next.state, tutor, next.config);
    if (next.state.status == SessionStatus::Ended) next.summary = fallback_summary(next);

    session = std::move(next);
    return {std::move(learner), std::move(tutor)};
}

std::string end_session(DialogueSession& session, llm::Provider& provider, const prompt::TemplateLibrary& templates) {
    if (session.state.status == SessionStatus::Ended) throw Error(Errc::SessionEnded, "session has already ended");

    std::string summary;
    try {
        VariableSet vars = session_variables(session.spec, session.kc);
        vars.set("theCoverage", coverage_text(session.state));
        vars.set("theHistory", history_text(session.turns));
        auto prompt = prompt::render(templates.get(prompt::template_id::kSessionSummary), vars);
        summary = complete_text(provider, llm::make_request(kTutorSystem, prompt.text, llm::kDialogueTemperature));
    } catch (const Error& e) {
        if (!e.is_provider_error()) throw;
    }

    if (summary.empty()) {
        summary = fallback_summary(session);
    } else {
        const auto objective = non_blank(session.kc.theObjective, session.spec.theObjective);
        if (!objective.empty() && !text::icontains(summary, objective)) {
            summary = "Objective: " + objective + ". " + summary;
        }
    }
    session.state.status = SessionStatus::Ended;
    session.summary = summary;
    return summary;
}

std::string fallback_summary(const DialogueSession& session) {
    const auto kc = non_blank(session.kc.theKC, session.spec.theKC);
    const auto objective = non_blank(session.kc.theObjective, session.spec.theObjective);
    return session.spec.theUserName + " worked on " + kc + ". Objective: " + objective + ". " +
           std::to_string(session.tutor_turns()) + " tutor turns; question types covered: " +
           coverage_text(session.state) + ". Final correct streak " + std::to_string(session.state.correct_streak) +
           ", hint depth " + std::to_string(session.state.hint_depth) + ".";
}

}  // namespace socratic::dialogue
