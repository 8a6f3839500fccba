#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "socratic/analytics/survey.hpp"
#include "socratic/error.hpp"
#include "socratic/prompt/json_extract.hpp"
#include "socratic/text.hpp"

namespace socratic::analytics {

namespace {

std::vector<std::string> normalized_labels(const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    for (const auto& label : raw) {
        auto norm = normalize_theme(label);
        if (norm.empty() || std::find(out.begin(), out.end(), norm) != out.end()) continue;
        out.push_back(std::move(norm));
        if (out.size() == kMaxThemes) break;
    }
    return out;
}

std::string_view question_text(std::string_view question_id) {
    return survey_questions()[question_id == "q12" ? 11 : 10];
}

}  // namespace

std::vector<OpenText> open_texts(const std::vector<SurveyResponse>& responses, std::string_view question) {
    if (question != "q11" && question != "q12" && question != "all") {
        throw Error(Errc::InvalidArgument, "open question must be q11, q12 or all", {std::string(question)});
    }
    std::vector<OpenText> out;
    for (const auto& r : responses) {
        if (question != "q12" && !text::trim(r.q11).empty()) out.push_back({r.id, "q11", r.q11});
        if (question != "q11" && !text::trim(r.q12).empty()) out.push_back({r.id, "q12", r.q12});
    }
    return out;
}

std::string normalize_theme(std::string_view label) {
    auto s = text::collapse_whitespace(label);
    while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(s.begin());
    while (!s.empty() && (s.back() == '"' || s.back() == '\'' || s.back() == '.')) s.pop_back();
    return text::title_case(text::trim(s));
}

ThemeAnnotation annotate_theme(const OpenText& open, llm::Provider& provider, const prompt::TemplateLibrary& templates) {
    ThemeAnnotation out{open.response_id, open.question_id, {}, false};
    if (text::trim(open.text).empty()) return out;

    prompt::VariableSet vars;
    vars.set("theQuestion", std::string(question_text(open.question_id)));
    vars.set("theAnswer", text::collapse_whitespace(open.text));
    auto rendered = prompt::render(templates.get(prompt::template_id::kThemeAnnotation), vars);
    auto req = llm::make_request("You label survey feedback with short themes. Reply with JSON only.", rendered.text,
                                 llm::kExtractionTemperature);

    for (int attempt = 0; attempt < 2; ++attempt) {
        const auto reply = provider.complete(req).text;
        if (auto labels = prompt::extract_string_array(reply)) {
            out.themes = normalized_labels(*labels);
            if (!out.themes.empty()) return out;
        }
        req.messages.push_back({llm::Role::Assistant, reply.empty() ? std::string("(empty reply)") : reply});
        req.messages.push_back({llm::Role::User, "Reply with only a json array of one to four short theme labels."});
    }
    out.fallback = true;
    return out;
}

std::vector<ThemeAnnotation> annotate_themes(const std::vector<OpenText>& texts, llm::Provider& provider,
                                             const prompt::TemplateLibrary& templates) {
    std::vector<ThemeAnnotation> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(annotate_theme(t, provider, templates));
    return out;
}

int ThemeGraph::edge_weight(std::string_view x, std::string_view y) const {
    if (x == y) return 0;
    if (y < x) std::swap(x, y);
    auto it = std::lower_bound(edges.begin(), edges.end(), std::pair{x, y}, [](const ThemeEdge& e, const auto& key) {
        return std::pair<std::string_view, std::string_view>{e.a, e.b} < key;
    });
    return it != edges.end() && it->a == x && it->b == y ? it->weight : 0;
}

ThemeGraph build_theme_graph(const std::vector<ThemeAnnotation>& annotations) {
    std::map<std::string, int> nodes;
    std::map<std::pair<std::string, std::string>, int> edges;
    for (const auto& a : annotations) {
        const std::set<std::string> distinct(a.themes.begin(), a.themes.end());
        for (auto i = distinct.begin(); i != distinct.end(); ++i) {
            ++nodes[*i];
            for (auto j = std::next(i); j != distinct.end(); ++j) ++edges[{*i, *j}];
        }
    }

    ThemeGraph g;
    for (auto& [label, weight] : nodes) g.nodes.push_back({label, weight});
    std::stable_sort(g.nodes.begin(), g.nodes.end(),
                     [](const ThemeNode& l, const ThemeNode& r) { return l.weight > r.weight; });
    for (auto& [key, weight] : edges) g.edges.push_back({key.first, key.second, weight});
    return g;
}

nlohmann::ordered_json to_json(const ThemeGraph& g) {
    nlohmann::ordered_json j;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : g.nodes) nodes.push_back({{"id", n.label}, {"weight", n.weight}});
    auto& links = j["links"] = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) links.push_back({{"source", e.a}, {"target", e.b}, {"weight", e.weight}});
    return j;
}

std::string format_table(const ThemeGraph& g) {
    std::ostringstream out;
    out << "themes (" << g.nodes.size() << ")\n";
    for (const auto& n : g.nodes) out << "  " << n.weight << "  " << n.label << '\n';
    out << "co-mentions (" << g.edges.size() << ")\n";
    for (const auto& e : g.edges) out << "  " << e.weight << "  " << e.a << " -- " << e.b << '\n';
    return out.str();
}

}  // namespace socratic::analytics
