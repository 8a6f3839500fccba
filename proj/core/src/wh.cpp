#include "socratic/wh.hpp"

#include <cctype>

#include "socratic/text.hpp"

namespace socratic {

std::string_view to_string(WhType wh) noexcept {
    switch (wh) {
        case WhType::What: return "What";
        case WhType::Why: return "Why";
        case WhType::How: return "How";
        case WhType::Who: return "Who";
        case WhType::When: return "When";
    }
    return "What";
}

std::optional<WhType> parse_wh_type(std::string_view s) {
    auto t = text::trim(s);
    while (!t.empty() && (t.back() == '?' || t.back() == '.')) t.pop_back();
    for (auto wh : kWhTypes) {
        if (text::iequals(t, to_string(wh))) return wh;
    }
    return std::nullopt;
}

std::optional<WhType> find_wh_word(std::string_view sentence) {
    const auto lower = text::to_lower(sentence);
    auto is_alpha = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; };
    std::size_t i = 0;
    while (i < lower.size()) {
        while (i < lower.size() && !is_alpha(lower[i])) ++i;
        std::size_t start = i;
        while (i < lower.size() && is_alpha(lower[i])) ++i;
        if (i == start) break;
        std::string_view word(lower.data() + start, i - start);
        for (auto wh : kWhTypes) {
            if (word == text::to_lower(to_string(wh))) return wh;
        }
    }
    return std::nullopt;
}

bool contains_wh_word(std::string_view sentence, WhType wh) {
    return text::contains_word(sentence, to_string(wh));
}

}  // namespace socratic
