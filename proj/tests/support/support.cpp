#include "support/support.hpp"

#include <cctype>
#include <fstream>
#include <random>
#include <sstream>

#include "socratic/id.hpp"

namespace socratic::testing {

namespace fs = std::filesystem;

fs::path fixture(const std::string& name) { return fs::path(SOCRATIC_FIXTURE_DIR) / name; }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

TempDir::TempDir() : path_(fs::temp_directory_path() / ("socratic-test-" + new_id())) {
    fs::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

scenario::ScenarioSpec sample_spec() {
    scenario::ScenarioSpec s;
    s.theLang = "English";
    s.theKC = "Behavior Reinforcement";
    s.theNumber = 3;
    s.theDomain = "Psychology";
    s.theTarget = "College Students";
    s.theAvatar = "default";
    s.theTutorName = "Ada";
    s.theContext = "Moderating an online discussion forum";
    s.theEnvironment = "Online Discussions";
    s.theUserName = "Sam";
    s.theType = scenario::Pedagogy::Socratic;
    s.theObjective = "Apply reinforcement to raise participation";
    s.theStyle = "Conversational";
    return s;
}

KnowledgeComponent sample_kc() {
    KnowledgeComponent kc;
    kc.theAvatar = "default";
    kc.theLang = "English";
    kc.theKC = "Positive Reinforcement";
    kc.theType = "Socratic";
    kc.theTarget = "College Students";
    kc.theTutorName = "Ada";
    kc.theContext = "Rewarding helpful forum posts";
    kc.theEnvironment = "Online Discussions";
    kc.theUserName = "Sam";
    kc.theStyle = "Conversational";
    kc.theObjective = "Use praise to raise participation";
    return kc;
}

namespace {

using Rng = std::mt19937_64;

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const std::vector<std::string> kFeedback = {
    "That is a fair start.", "You noticed something important.", "Good, that connects to the scenario.",
    "I can see your reasoning there.", "That idea needs a little more support.", "Let us slow down for a moment.",
};

const std::vector<std::string> kQuestionBodies = {
    "does the timing of a reward matter here", "would change if the praise stopped",
    "might a quiet student respond to a public thank-you", "decides which posts deserve recognition",
    "should the moderator step back", "makes a reward feel meaningful",
};

const std::vector<std::string> kWh = {"What", "Why", "How", "Who", "When"};

std::string good_reply(Rng& rng) {
    std::string feedback = pick(rng, kFeedback);
    if (chance(rng, 0.3)) feedback += " " + pick(rng, kFeedback);
    const auto& wh = pick(rng, kWh);
    if (chance(rng, 0.2)) return feedback + " So, " + std::string(1, static_cast<char>(std::tolower(wh[0]))) +
                                 wh.substr(1) + " " + pick(rng, kQuestionBodies) + "?";
    return feedback + " " + wh + " " + pick(rng, kQuestionBodies) + "?";
}

std::string bad_reply(Rng& rng, const std::string& expected) {
    switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
        case 0: return "Nice work. Keep going with that line of thought.";
        case 1: return "Is that right? What else matters?";
        case 2:
            if (!expected.empty()) return "Well, the answer is " + expected + ". What do you make of that?";
            return "Good. Tell me more.";
        case 3: return "Good effort. Can you say more about it?";
        case 4: return "What do you mean by that? Tell me more.";
        default: return "Why?";
    }
}

std::string assessment_reply(Rng& rng) {
    static const std::vector<std::string> labels = {"Correct", "correct", "Partial", "partially correct",
                                                    "Incorrect", "OffTopic", "off-topic", "off_topic"};
    const std::string obj = "{\"classification\": \"" + pick(rng, labels) + "\", \"rationale\": \"Checked against the question.\"}";
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: return obj;
        case 1: return "Assessment:\n```json\n" + obj + "\n```";
        default: return "Here you go: " + obj + " Hope that helps.";
    }
}

std::string garbage_assessment(Rng& rng) {
    static const std::vector<std::string> junk = {"I think the learner is doing fine.",
                                                  "{\"classification\": \"Excellent\"}",
                                                  "{classification: Correct}", ""};
    return pick(rng, junk);
}

}  // namespace

SessionPlan plan_session(std::uint64_t seed, int learner_turns, const std::string& expected_answer) {
    Rng rng(seed);
    SessionPlan plan;
    plan.config.expected_answer = expected_answer;
    plan.wh = kWhTypes[std::uniform_int_distribution<std::size_t>(0, 4)(rng)];
    plan.opening_question = std::string(to_string(plan.wh)) + " " + pick(rng, kQuestionBodies) + "?";
    if (chance(rng, 0.2)) plan.config.max_turns = std::uniform_int_distribution<int>(2, learner_turns)(rng);

    std::string context = "You moderate a busy course forum. Few students post each week.";
    if (chance(rng, 0.3)) context += " Can you picture it?";
    if (!expected_answer.empty() && chance(rng, 0.3)) context += " The key idea is " + expected_answer + ".";
    plan.script.push_back({match::kContext, context});

    const int submits = std::min(learner_turns, plan.config.max_turns - 1);
    for (int i = 0; i < submits; ++i) {
        std::string line;
        if (chance(rng, 0.08)) {
            line = chance(rng, 0.5) ? "" : "   ";
        } else {
            line = "I think " + pick(rng, kQuestionBodies) + ".";
            if (!expected_answer.empty() && chance(rng, 0.05)) line += " Maybe " + expected_answer + "?";
            plan.script.push_back({match::kAssessment, chance(rng, 0.1) ? garbage_assessment(rng) : assessment_reply(rng)});
            if (plan.script.back().response.find("Checked") == std::string::npos) {
                plan.script.push_back(
                    {match::kAssessmentRepair, chance(rng, 0.5) ? assessment_reply(rng) : garbage_assessment(rng)});
            }
        }
        plan.learner_lines.push_back(line);

        if (chance(rng, 0.6)) {
            plan.script.push_back({match::kTutor, good_reply(rng)});
        } else {
            plan.script.push_back({match::kTutor, bad_reply(rng, expected_answer)});
            plan.script.push_back(
                {match::kTutorRepair, chance(rng, 0.5) ? good_reply(rng) : bad_reply(rng, expected_answer)});
        }
    }

    plan.explicit_end = 1 + submits < plan.config.max_turns;
    if (plan.explicit_end) {
        std::string summary = "The learner discussed reinforcement in the forum.";
        if (chance(rng, 0.7)) summary += " Objective: Use praise to raise participation.";
        plan.script.push_back({match::kSummary, summary});
    }
    return plan;
}

bool oracle_has_wh_word(const std::string& sentence) {
    std::string word;
    auto flush = [&] {
        const bool hit = word == "what" || word == "why" || word == "how" || word == "who" || word == "when";
        word.clear();
        return hit;
    };
    for (char c : sentence) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (flush()) {
            return true;
        }
    }
    return flush();
}

std::string oracle_last_sentence(const std::string& text) {
    std::size_t end = text.find_last_not_of(" \t\n");
    if (end == std::string::npos) return {};
    std::size_t i = end;
    while (i > 0) {
        const char c = text[i - 1];
        if ((c == ' ' || c == '\n') && i >= 2 && (text[i - 2] == '.' || text[i - 2] == '!' || text[i - 2] == '?')) {
            break;
        }
        --i;
    }
    return text.substr(i, end - i + 1);
}

}  // namespace socratic::testing
