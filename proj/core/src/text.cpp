#include "socratic/text.hpp"

#include <algorithm>
#include <cctype>

namespace socratic::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

}  // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size() && to_lower(a) == to_lower(b);
}

bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t start = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (i > start) words.emplace_back(s.substr(start, i - start));
    }
    return words;
}

std::vector<std::string> split_sentences(std::string_view s) {
    std::vector<std::string> sentences;
    std::size_t start = 0;
    std::size_t i = 0;
    while (i < s.size()) {
        if (is_terminator(s[i])) {
            std::size_t j = i;
            while (j < s.size() && (is_terminator(s[j]) || s[j] == '"' || s[j] == '\'' || s[j] == ')')) ++j;
            if (j == s.size() || is_space(s[j])) {
                auto sentence = trim(s.substr(start, j - start));
                if (!sentence.empty()) sentences.push_back(std::move(sentence));
                start = j;
            }
            i = j;
            continue;
        }
        ++i;
    }
    auto tail = trim(s.substr(start));
    if (!tail.empty()) sentences.push_back(std::move(tail));
    return sentences;
}

std::string first_sentence(std::string_view s) {
    auto sentences = split_sentences(s);
    return sentences.empty() ? std::string{} : sentences.front();
}

std::string last_sentence(std::string_view s) {
    auto sentences = split_sentences(s);
    return sentences.empty() ? std::string{} : sentences.back();
}

bool contains_word(std::string_view s, std::string_view word) {
    if (word.empty()) return false;
    const auto hay = to_lower(s);
    const auto needle = to_lower(word);
    std::size_t pos = hay.find(needle);
    while (pos != std::string::npos) {
        bool left_ok = pos == 0 || !is_alpha(hay[pos - 1]);
        std::size_t end = pos + needle.size();
        bool right_ok = end == hay.size() || !is_alpha(hay[end]);
        if (left_ok && right_ok) return true;
        pos = hay.find(needle, pos + 1);
    }
    return false;
}

std::string title_case(std::string_view s) {
    std::string out(s);
    bool at_word_start = true;
    for (auto& c : out) {
        if (is_space(c)) {
            at_word_start = true;
        } else if (at_word_start) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            at_word_start = false;
        }
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace socratic::text
