#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socratic/llm/provider.hpp"
#include "socratic/prompt/template.hpp"

namespace socratic::analytics {

inline constexpr int kQuestionCount = 10;
inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 7;
inline constexpr int kNeutralScore = 4;

/// Statement text of the ten scored items and the two open questions.
const std::array<std::string_view, 12>& survey_questions();

struct SurveyResponse {
    std::string id;  // assigned by the store
    std::string participant_id;
    std::array<int, kQuestionCount> scores{};
    std::string q11;
    std::string q12;

    /// Throws Error(OutOfRange) naming the question, Error(InvalidValue) for a blank participant.
    void validate() const;
    bool operator==(const SurveyResponse&) const = default;
};

/// Reads {participant_id, q1..q10, q11, q12}.
SurveyResponse survey_response_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SurveyResponse& r);

/// Percentages are held in tenths of a percent so rounding stays exact.
struct Tenths {
    long value = 0;
    double as_double() const { return static_cast<double>(value) / 10.0; }
    bool operator==(const Tenths&) const = default;
    auto operator<=>(const Tenths&) const = default;
};

struct QuestionSummary {
    int question = 0;              // 1-based
    long mean_hundredths = 0;      // mean rounded to two decimals, times 100
    std::array<int, 7> counts{};   // counts[s - 1] for score s
    std::array<Tenths, 7> percentages{};
    Tenths pct_below_4;
    Tenths pct_at_4;
    Tenths pct_above_4;

    double mean() const { return static_cast<double>(mean_hundredths) / 100.0; }
    bool operator==(const QuestionSummary&) const = default;
};

struct LikertSummary {
    std::size_t respondents = 0;
    std::array<QuestionSummary, kQuestionCount> questions{};
    Tenths overall_below_4;
    Tenths overall_at_or_above_4;

    bool operator==(const LikertSummary&) const = default;
};

/// Rounds 100 * part / whole to one decimal, halves away from zero.
Tenths percent_tenths(long part, long whole);

/// Per-question counts, percentages and means. Throws Error(EmptyDataset).
LikertSummary summarize(const std::vector<SurveyResponse>& responses);

nlohmann::ordered_json to_json(const LikertSummary& s);
/// Plain-text table, one row per question plus the pooled totals.
std::string format_table(const LikertSummary& s);

struct OpenText {
    std::string response_id;
    std::string question_id;  // "q11" or "q12"
    std::string text;
};

/// Open answers of `responses`; `question` is "q11", "q12" or "all".
std::vector<OpenText> open_texts(const std::vector<SurveyResponse>& responses, std::string_view question);

struct ThemeAnnotation {
    std::string response_id;
    std::string question_id;
    std::vector<std::string> themes;
    bool fallback = false;  // extraction failed twice

    bool operator==(const ThemeAnnotation&) const = default;
};

inline constexpr std::size_t kMaxThemes = 4;

/// Trims, collapses whitespace and title-cases a label.
std::string normalize_theme(std::string_view label);

/// One model call per non-empty text requesting a JSON array of theme labels.
ThemeAnnotation annotate_theme(const OpenText& text, llm::Provider& provider,
                               const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());
std::vector<ThemeAnnotation> annotate_themes(const std::vector<OpenText>& texts, llm::Provider& provider,
                                             const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

struct ThemeNode {
    std::string label;
    int weight = 0;
    bool operator==(const ThemeNode&) const = default;
};

struct ThemeEdge {
    std::string a;  // a < b
    std::string b;
    int weight = 0;
    bool operator==(const ThemeEdge&) const = default;
};

/// Undirected co-mention network. Nodes sorted by weight descending then
/// label; edges sorted by (a, b).
struct ThemeGraph {
    std::vector<ThemeNode> nodes;
    std::vector<ThemeEdge> edges;

    int edge_weight(std::string_view x, std::string_view y) const;
    bool operator==(const ThemeGraph&) const = default;
};

ThemeGraph build_theme_graph(const std::vector<ThemeAnnotation>& annotations);

/// {nodes: [{id, weight}], links: [{source, target, weight}]}
nlohmann::ordered_json to_json(const ThemeGraph& g);
std::string format_table(const ThemeGraph& g);

}  // namespace socratic::analytics
