#include <gtest/gtest.h>

#include "socratic/text.hpp"
#include "socratic/wh.hpp"

namespace socratic {
namespace {

using text::split_sentences;

TEST(Text, TrimAndCollapse) {
    EXPECT_EQ(text::trim("  a b \n"), "a b");
    EXPECT_EQ(text::collapse_whitespace("  a \t\n b  c "), "a b c");
    EXPECT_EQ(text::collapse_whitespace(""), "");
}

TEST(Text, SplitSentencesKeepsTerminators) {
    auto s = split_sentences("Good start. Why does it work?");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0], "Good start.");
    EXPECT_EQ(s[1], "Why does it work?");
}

TEST(Text, SplitSentencesIgnoresInnerDots) {
    auto s = split_sentences("Version 2.5 is out. e.g.this stays! Really?!");
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0], "Version 2.5 is out.");
    EXPECT_EQ(s[2], "Really?!");
}

TEST(Text, SplitSentencesHandlesClosingQuotes) {
    auto s = split_sentences("He said \"stop.\" Then what?");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[1], "Then what?");
}

TEST(Text, TrailingFragmentIsASentence) {
    auto s = split_sentences("One. two without end");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[1], "two without end");
    EXPECT_EQ(text::last_sentence("One. Two?"), "Two?");
    EXPECT_EQ(text::first_sentence("One. Two?"), "One.");
}

TEST(Text, ContainsWordRespectsBoundaries) {
    EXPECT_TRUE(text::contains_word("So, WHY not?", "why"));
    EXPECT_FALSE(text::contains_word("somewhat odd", "what"));
    EXPECT_FALSE(text::contains_word("showhow", "how"));
    EXPECT_TRUE(text::contains_word("how", "how"));
}

TEST(Text, TitleCase) {
    EXPECT_EQ(text::title_case("instant feedback"), "Instant Feedback");
    EXPECT_EQ(text::title_case("AI-assisted q&a"), "AI-assisted Q&a");
}

TEST(Wh, FindsEarliestWholeWord) {
    EXPECT_EQ(find_wh_word("So, how and why?"), WhType::How);
    EXPECT_EQ(find_wh_word("Whatever happens, when?"), WhType::When);
    EXPECT_FALSE(find_wh_word("Somehow it works?").has_value());
    EXPECT_TRUE(contains_wh_word("Who decides?", WhType::Who));
    EXPECT_FALSE(contains_wh_word("Whose idea?", WhType::Who));
}

TEST(Wh, ParseAcceptsPunctuationAndCase) {
    EXPECT_EQ(parse_wh_type("why?"), WhType::Why);
    EXPECT_EQ(parse_wh_type(" WHEN "), WhType::When);
    EXPECT_FALSE(parse_wh_type("which").has_value());
    for (auto wh : kWhTypes) EXPECT_EQ(parse_wh_type(to_string(wh)), wh);
}

}  // namespace
}  // namespace socratic
