#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared across modules.
namespace socratic::text {

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
bool icontains(std::string_view haystack, std::string_view needle);

/// Collapses runs of whitespace into single spaces and trims the ends.
std::string collapse_whitespace(std::string_view s);

/// Splits on whitespace; empty tokens are dropped.
std::vector<std::string> split_words(std::string_view s);

/// Sentences end at '.', '!' or '?' (runs allowed) followed by whitespace or
/// end of text. Each returned sentence is trimmed and keeps its terminator.
std::vector<std::string> split_sentences(std::string_view s);

std::string first_sentence(std::string_view s);
std::string last_sentence(std::string_view s);

/// True when `word` occurs in `s` delimited by non-letters, ignoring case.
bool contains_word(std::string_view s, std::string_view word);

/// Upper-cases the first letter of every word, leaving the rest untouched.
std::string title_case(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace socratic::text
