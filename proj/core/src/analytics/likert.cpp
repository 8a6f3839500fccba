#include <sstream>

#include "socratic/analytics/survey.hpp"
#include "socratic/error.hpp"
#include "socratic/text.hpp"

namespace socratic::analytics {

namespace {

constexpr std::array<std::string_view, 12> kQuestions{{
    "The tutoring dialogue felt effective and fluent.",
    "Talking with the tutor felt like talking with a person.",
    "I enjoyed using the tutor.",
    "The way the tutor teaches is appealing.",
    "Learning with the tutor made me happy.",
    "The tutor deepened my understanding of the topic.",
    "The tutor increased my motivation to learn.",
    "Using the tutor improved my learning outcomes.",
    "The tutor met my learning needs.",
    "I would recommend the tutor to others.",
    "Which feature of the tutor did you like most?",
    "What else would you change or suggest?",
}};

// round(num / den) with halves away from zero; num, den >= 0.
long div_round(long num, long den) { return (2 * num + den) / (2 * den); }

int score_from_json(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key)) throw Error(Errc::MissingKey, "missing '" + key + "'", {key});
    const auto& v = j.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == static_cast<double>(static_cast<int>(d))) return static_cast<int>(d);
    }
    throw Error(Errc::InvalidValue, "'" + key + "' must be an integer", {key});
}

std::string fixed1(Tenths t) { return std::to_string(t.value / 10) + "." + std::to_string(t.value % 10); }

std::string fixed2(long hundredths) {
    auto frac = std::to_string(hundredths % 100);
    return std::to_string(hundredths / 100) + "." + (frac.size() < 2 ? "0" + frac : frac);
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

}  // namespace

const std::array<std::string_view, 12>& survey_questions() { return kQuestions; }

void SurveyResponse::validate() const {
    if (text::trim(participant_id).empty()) {
        throw Error(Errc::InvalidValue, "participant_id must not be blank", {"participant_id"});
    }
    for (int i = 0; i < kQuestionCount; ++i) {
        const int s = scores[static_cast<std::size_t>(i)];
        if (s < kMinScore || s > kMaxScore) {
            const auto name = "q" + std::to_string(i + 1);
            throw Error(Errc::OutOfRange, name + " score " + std::to_string(s) + " is outside 1..7", {name});
        }
    }
}

SurveyResponse survey_response_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(Errc::InvalidValue, "survey response must be a JSON object");
    SurveyResponse r;
    if (!j.contains("participant_id")) throw Error(Errc::MissingKey, "missing 'participant_id'", {"participant_id"});
    const auto& pid = j.at("participant_id");
    r.participant_id = pid.is_string() ? pid.get<std::string>() : pid.dump();
    for (int i = 0; i < kQuestionCount; ++i) {
        r.scores[static_cast<std::size_t>(i)] = score_from_json(j, "q" + std::to_string(i + 1));
    }
    for (const auto* key : {"q11", "q12"}) {
        if (j.contains(key) && !j.at(key).is_null()) {
            if (!j.at(key).is_string()) throw Error(Errc::InvalidValue, std::string("'") + key + "' must be text", {key});
            (key[2] == '1' ? r.q11 : r.q12) = j.at(key).get<std::string>();
        }
    }
    if (j.contains("id") && j.at("id").is_string()) r.id = j.at("id").get<std::string>();
    return r;
}

nlohmann::ordered_json to_json(const SurveyResponse& r) {
    nlohmann::ordered_json j;
    if (!r.id.empty()) j["id"] = r.id;
    j["participant_id"] = r.participant_id;
    for (int i = 0; i < kQuestionCount; ++i) j["q" + std::to_string(i + 1)] = r.scores[static_cast<std::size_t>(i)];
    j["q11"] = r.q11;
    j["q12"] = r.q12;
    return j;
}

Tenths percent_tenths(long part, long whole) {
    if (whole <= 0) throw Error(Errc::InvalidArgument, "percentage of an empty total");
    return {div_round(1000 * part, whole)};
}

LikertSummary summarize(const std::vector<SurveyResponse>& responses) {
    if (responses.empty()) throw Error(Errc::EmptyDataset, "no survey responses");
    for (const auto& r : responses) r.validate();

    const long n = static_cast<long>(responses.size());
    LikertSummary out;
    out.respondents = responses.size();
    long below = 0;
    for (int q = 0; q < kQuestionCount; ++q) {
        auto& qs = out.questions[static_cast<std::size_t>(q)];
        qs.question = q + 1;
        long sum = 0;
        for (const auto& r : responses) {
            const int s = r.scores[static_cast<std::size_t>(q)];
            ++qs.counts[static_cast<std::size_t>(s - 1)];
            sum += s;
        }
        qs.mean_hundredths = div_round(100 * sum, n);
        long lo = 0;
        long hi = 0;
        for (int s = kMinScore; s <= kMaxScore; ++s) {
            const long c = qs.counts[static_cast<std::size_t>(s - 1)];
            qs.percentages[static_cast<std::size_t>(s - 1)] = percent_tenths(c, n);
            if (s < kNeutralScore) lo += c;
            if (s > kNeutralScore) hi += c;
        }
        qs.pct_below_4 = percent_tenths(lo, n);
        qs.pct_at_4 = percent_tenths(qs.counts[kNeutralScore - 1], n);
        qs.pct_above_4 = percent_tenths(hi, n);
        below += lo;
    }
    const long total = n * kQuestionCount;
    out.overall_below_4 = percent_tenths(below, total);
    out.overall_at_or_above_4 = percent_tenths(total - below, total);
    return out;
}

nlohmann::ordered_json to_json(const LikertSummary& s) {
    nlohmann::ordered_json j;
    j["respondents"] = s.respondents;
    auto& qs = j["questions"] = nlohmann::ordered_json::array();
    for (const auto& q : s.questions) {
        nlohmann::ordered_json e;
        e["question"] = "q" + std::to_string(q.question);
        e["mean"] = q.mean();
        e["counts"] = q.counts;
        auto& pct = e["percentages"] = nlohmann::ordered_json::object();
        for (int score = kMinScore; score <= kMaxScore; ++score) {
            pct[std::to_string(score)] = q.percentages[static_cast<std::size_t>(score - 1)].as_double();
        }
        e["pct_below_4"] = q.pct_below_4.as_double();
        e["pct_at_4"] = q.pct_at_4.as_double();
        e["pct_above_4"] = q.pct_above_4.as_double();
        qs.push_back(std::move(e));
    }
    j["overall_below_4"] = s.overall_below_4.as_double();
    j["overall_at_or_above_4"] = s.overall_at_or_above_4.as_double();
    return j;
}

std::string format_table(const LikertSummary& s) {
    std::ostringstream out;
    out << "question   mean    <4     =4     >4  " << "     1     2     3     4     5     6     7\n";
    for (const auto& q : s.questions) {
        out << pad("q" + std::to_string(q.question), 8) << pad(fixed2(q.mean_hundredths), 7)
            << pad(fixed1(q.pct_below_4), 7) << pad(fixed1(q.pct_at_4), 7) << pad(fixed1(q.pct_above_4), 7) << "  ";
        for (auto p : q.percentages) out << pad(fixed1(p), 6);
        out << '\n';
    }
    out << "respondents " << s.respondents << "; overall below 4: " << fixed1(s.overall_below_4)
        << "%; at or above 4: " << fixed1(s.overall_at_or_above_4) << "%\n";
    return out.str();
}

}  // namespace socratic::analytics
