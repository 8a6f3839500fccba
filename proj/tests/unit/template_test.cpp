#include <gtest/gtest.h>

#include <fstream>

#include "socratic/error.hpp"
#include "socratic/prompt/template.hpp"
#include "socratic/scenario/scenario_spec.hpp"
#include "support/support.hpp"

namespace socratic::prompt {
namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidArgument;
}

TEST(Template, PlaceholdersInFirstOccurrenceOrder) {
    auto t = PromptTemplate::parse("%[b]% then %[a]% and %[b]% again", "t");
    EXPECT_EQ(t.placeholders(), (std::vector<std::string>{"b", "a"}));
    EXPECT_TRUE(t.has_placeholder("a"));
    EXPECT_FALSE(t.has_placeholder("c"));
    EXPECT_EQ(t.id(), "t");
}

TEST(Template, RenderSubstitutesEveryOccurrence) {
    auto t = parse_template("Hi %[name]%, %[name]%! [%]");
    auto r = render(t, {{"name", "Sam"}, {"unused", "x"}});
    EXPECT_EQ(r.text, "Hi Sam, Sam! [%]");
}

TEST(Template, ValuesAreNotRescanned) {
    auto r = render(parse_template("%[a]%"), {{"a", "%[b]%"}});
    EXPECT_EQ(r.text, "%[b]%");
}

TEST(Template, MissingVariablesAreAllReported) {
    try {
        render(parse_template("%[a]% %[b]% %[c]%"), {{"b", "1"}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingVariable);
        EXPECT_EQ(e.details(), (std::vector<std::string>{"a", "c"}));
    }
}

TEST(Template, MalformedPlaceholders) {
    EXPECT_EQ(code_of([] { parse_template("abc %[open"); }), Errc::MalformedPlaceholder);
    EXPECT_EQ(code_of([] { parse_template("%[]%"); }), Errc::MalformedPlaceholder);
    EXPECT_EQ(code_of([] { parse_template("%[two words]%"); }), Errc::MalformedPlaceholder);
    EXPECT_EQ(code_of([] { parse_template("%[a%[b]%"); }), Errc::MalformedPlaceholder);
    EXPECT_EQ(code_of([] { parse_template(""); }), Errc::InvalidArgument);
}

TEST(Template, StrayCloseDelimiterIsLiteral) {
    EXPECT_EQ(render(parse_template("a ]% b"), {}).text, "a ]% b");
}

TEST(Template, BlankBindingRejected) {
    VariableSet v;
    EXPECT_EQ(code_of([&] { v.set("a", "  "); }), Errc::InvalidArgument);
}

TEST(Template, BundledSetIsComplete) {
    const auto& lib = TemplateLibrary::bundled();
    for (auto id : {template_id::kLessonCreation, template_id::kScenarioExtraction, template_id::kTreeExpansion,
                    template_id::kMatrixQuestions, template_id::kSessionContext, template_id::kOpeningQuestion,
                    template_id::kAssessment, template_id::kTutorTurn, template_id::kSessionSummary,
                    template_id::kThemeAnnotation}) {
        EXPECT_TRUE(lib.contains(id)) << id;
    }
    EXPECT_EQ(code_of([&] { lib.get("nope"); }), Errc::UnknownTemplate);
}

TEST(Template, LessonCreationUsesEverySpecVariable) {
    const auto& t = TemplateLibrary::bundled().get(template_id::kLessonCreation);
    for (auto name : scenario::kSpecVariables) EXPECT_TRUE(t.has_placeholder(name)) << name;
    EXPECT_EQ(t.placeholders().size(), std::size(scenario::kSpecVariables));

    auto r = render(t, testing::sample_spec().variables());
    EXPECT_EQ(r.text.find("%["), std::string::npos);
    EXPECT_NE(r.text.find("Behavior Reinforcement"), std::string::npos);
    EXPECT_EQ(r.source_template_id, "lesson_creation");
}

TEST(Template, DirectoryOverridesById) {
    testing::TempDir dir;
    std::ofstream(dir.path() / "assessment.txt") << "Grade %[theResponse]%";
    std::ofstream(dir.path() / "extra.txt") << "Extra %[x]%";
    TemplateLibrary lib = TemplateLibrary::bundled();
    lib.load_directory(dir.path());
    EXPECT_EQ(render(lib.get("assessment"), {{"theResponse", "ok"}}).text, "Grade ok");
    EXPECT_TRUE(lib.contains("extra"));
    EXPECT_TRUE(lib.contains("tutor_turn"));
}

}  // namespace
}  // namespace socratic::prompt
