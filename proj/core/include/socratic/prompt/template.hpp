#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace socratic::prompt {

inline constexpr std::string_view kOpenDelimiter = "%[";
inline constexpr std::string_view kCloseDelimiter = "]%";

/// Placeholder bindings. Values must be non-empty after trimming.
class VariableSet {
public:
    VariableSet() = default;
    VariableSet(std::initializer_list<std::pair<const std::string, std::string>> init);

    /// Throws Error(InvalidArgument) when `value` is blank.
    VariableSet& set(std::string name, std::string value);

    bool contains(std::string_view name) const;
    const std::string* find(std::string_view name) const;
    const std::map<std::string, std::string, std::less<>>& bindings() const noexcept {
        return bindings_;
    }

    bool operator==(const VariableSet&) const = default;

private:
    std::map<std::string, std::string, std::less<>> bindings_;
};

class PromptTemplate;

struct RenderedPrompt {
    std::string text;
    std::string source_template_id;
    VariableSet bindings_used;
};

/// A prompt with `%[name]%` placeholders. The grammar does not nest and has no
/// escapes: every `%[` must be closed by the next `]%`.
class PromptTemplate {
public:
    /// Throws Error(MalformedPlaceholder) on an unterminated or invalid placeholder
    /// and Error(InvalidArgument) on empty text.
    static PromptTemplate parse(std::string text, std::string id = {});

    const std::string& id() const noexcept { return id_; }
    const std::string& raw_text() const noexcept { return raw_text_; }

    /// Distinct placeholder names in first-occurrence order.
    const std::vector<std::string>& placeholders() const noexcept { return placeholders_; }

    bool has_placeholder(std::string_view name) const;

private:
    struct Segment {
        bool is_placeholder;
        std::string value;  // literal bytes or placeholder name
    };

    PromptTemplate() = default;

    std::string id_;
    std::string raw_text_;
    std::vector<std::string> placeholders_;
    std::vector<Segment> segments_;

    friend RenderedPrompt render(const PromptTemplate& tmpl, const VariableSet& vars);
};

PromptTemplate parse_template(std::string_view text);

/// Substitutes every placeholder. Unused bindings are ignored. Throws
/// Error(MissingVariable) listing every unbound placeholder.
RenderedPrompt render(const PromptTemplate& tmpl, const VariableSet& vars);

/// Named templates. The bundled set ships inside the library; a directory of
/// UTF-8 files (file stem = template id) may override or extend it.
class TemplateLibrary {
public:
    static const TemplateLibrary& bundled();

    TemplateLibrary() = default;

    void add(PromptTemplate tmpl);
    /// Loads every regular file in `dir`. Throws Error(IoError) on unreadable input.
    void load_directory(const std::filesystem::path& dir);

    bool contains(std::string_view id) const;
    /// Throws Error(UnknownTemplate).
    const PromptTemplate& get(std::string_view id) const;
    std::vector<std::string> ids() const;

private:
    std::map<std::string, PromptTemplate, std::less<>> templates_;
};

/// Ids of the templates compiled into the library.
namespace template_id {
inline constexpr std::string_view kLessonCreation = "lesson_creation";
inline constexpr std::string_view kScenarioExtraction = "scenario_extraction";
inline constexpr std::string_view kTreeExpansion = "tree_expansion";
inline constexpr std::string_view kMatrixQuestions = "matrix_questions";
inline constexpr std::string_view kSessionContext = "session_context";
inline constexpr std::string_view kOpeningQuestion = "opening_question";
inline constexpr std::string_view kAssessment = "assessment";
inline constexpr std::string_view kTutorTurn = "tutor_turn";
inline constexpr std::string_view kSessionSummary = "session_summary";
inline constexpr std::string_view kThemeAnnotation = "theme_annotation";
}  // namespace template_id

}  // namespace socratic::prompt
