#include "socratic/prompt/json_extract.hpp"

#include <cmath>
#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <limits>

#include "socratic/error.hpp"
#include "socratic/text.hpp"

namespace socratic::prompt {

namespace {

using ojson = nlohmann::ordered_json;

constexpr int kMaxDepth = 256;

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    std::optional<ojson> value(std::size_t& pos, int depth) {
        if (depth > kMaxDepth || pos >= s_.size()) return std::nullopt;
        switch (s_[pos]) {
            case '{': return object(pos, depth);
            case '[': return array(pos, depth);
            case '"': {
                std::string str;
                if (!string(pos, str)) return std::nullopt;
                return ojson(std::move(str));
            }
            case 't': return literal(pos, "true", ojson(true));
            case 'f': return literal(pos, "false", ojson(false));
            case 'n': return literal(pos, "null", ojson(nullptr));
            default: return number(pos);
        }
    }

    void skip_ws(std::size_t& pos) const {
        while (pos < s_.size() && (s_[pos] == ' ' || s_[pos] == '\t' || s_[pos] == '\n' || s_[pos] == '\r')) {
            ++pos;
        }
    }

private:
    std::optional<ojson> object(std::size_t& pos, int depth) {
        ojson obj = ojson::object();
        ++pos;  // '{'
        skip_ws(pos);
        if (pos < s_.size() && s_[pos] == '}') {
            ++pos;
            return obj;
        }
        while (true) {
            skip_ws(pos);
            if (pos >= s_.size() || s_[pos] != '"') return std::nullopt;
            std::string key;
            if (!string(pos, key)) return std::nullopt;
            skip_ws(pos);
            if (pos >= s_.size() || s_[pos] != ':') return std::nullopt;
            ++pos;
            skip_ws(pos);
            auto v = value(pos, depth + 1);
            if (!v) return std::nullopt;
            obj[key] = std::move(*v);
            skip_ws(pos);
            if (pos >= s_.size()) return std::nullopt;
            if (s_[pos] == ',') {
                ++pos;
                continue;
            }
            if (s_[pos] == '}') {
                ++pos;
                return obj;
            }
            return std::nullopt;
        }
    }

    std::optional<ojson> array(std::size_t& pos, int depth) {
        ojson arr = ojson::array();
        ++pos;  // '['
        skip_ws(pos);
        if (pos < s_.size() && s_[pos] == ']') {
            ++pos;
            return arr;
        }
        while (true) {
            skip_ws(pos);
            auto v = value(pos, depth + 1);
            if (!v) return std::nullopt;
            arr.push_back(std::move(*v));
            skip_ws(pos);
            if (pos >= s_.size()) return std::nullopt;
            if (s_[pos] == ',') {
                ++pos;
                continue;
            }
            if (s_[pos] == ']') {
                ++pos;
                return arr;
            }
            return std::nullopt;
        }
    }

    static int hex_digit(char c) {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    }

    bool hex4(std::size_t& pos, unsigned& out) const {
        if (pos + 4 > s_.size()) return false;
        out = 0;
        for (int i = 0; i < 4; ++i) {
            int d = hex_digit(s_[pos + static_cast<std::size_t>(i)]);
            if (d < 0) return false;
            out = out * 16 + static_cast<unsigned>(d);
        }
        pos += 4;
        return true;
    }

    static void append_utf8(std::string& out, unsigned cp) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }

    // Length of the well-formed UTF-8 sequence at `pos`, or 0.
    std::size_t utf8_length(std::size_t pos) const {
        auto byte = [&](std::size_t i) { return i < s_.size() ? static_cast<unsigned char>(s_[i]) : 0u; };
        const unsigned b0 = byte(pos);
        std::size_t len = 0;
        unsigned lo = 0x80;
        unsigned hi = 0xBF;
        if (b0 >= 0xC2 && b0 <= 0xDF) {
            len = 2;
        } else if (b0 >= 0xE0 && b0 <= 0xEF) {
            len = 3;
            if (b0 == 0xE0) lo = 0xA0;
            if (b0 == 0xED) hi = 0x9F;
        } else if (b0 >= 0xF0 && b0 <= 0xF4) {
            len = 4;
            if (b0 == 0xF0) lo = 0x90;
            if (b0 == 0xF4) hi = 0x8F;
        } else {
            return 0;
        }
        if (byte(pos + 1) < lo || byte(pos + 1) > hi) return 0;
        for (std::size_t i = 2; i < len; ++i) {
            if (byte(pos + i) < 0x80 || byte(pos + i) > 0xBF) return 0;
        }
        return len;
    }

    bool string(std::size_t& pos, std::string& out) const {
        ++pos;  // opening quote
        while (pos < s_.size()) {
            char c = s_[pos];
            if (c == '"') {
                ++pos;
                return true;
            }
            if (static_cast<unsigned char>(c) < 0x20) return false;
            if (static_cast<unsigned char>(c) >= 0x80) {
                const auto len = utf8_length(pos);
                if (len == 0) return false;
                out.append(s_, pos, len);
                pos += len;
                continue;
            }
            if (c != '\\') {
                out.push_back(c);
                ++pos;
                continue;
            }
            if (++pos >= s_.size()) return false;
            char e = s_[pos++];
            switch (e) {
                case '"': out.push_back('"'); break;
                case '\\': out.push_back('\\'); break;
                case '/': out.push_back('/'); break;
                case 'b': out.push_back('\b'); break;
                case 'f': out.push_back('\f'); break;
                case 'n': out.push_back('\n'); break;
                case 'r': out.push_back('\r'); break;
                case 't': out.push_back('\t'); break;
                case 'u': {
                    unsigned cp = 0;
                    if (!hex4(pos, cp)) return false;
                    if (cp >= 0xD800 && cp <= 0xDBFF) {
                        unsigned lo = 0;
                        if (pos + 1 >= s_.size() || s_[pos] != '\\' || s_[pos + 1] != 'u') return false;
                        pos += 2;
                        if (!hex4(pos, lo) || lo < 0xDC00 || lo > 0xDFFF) return false;
                        cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
                    } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
                        return false;
                    }
                    append_utf8(out, cp);
                    break;
                }
                default: return false;
            }
        }
        return false;
    }

    std::optional<ojson> literal(std::size_t& pos, std::string_view word, ojson v) const {
        if (s_.substr(pos, word.size()) != word) return std::nullopt;
        pos += word.size();
        return v;
    }

    std::optional<ojson> number(std::size_t& pos) const {
        auto digit = [&](std::size_t p) { return p < s_.size() && s_[p] >= '0' && s_[p] <= '9'; };
        const std::size_t start = pos;
        std::size_t p = pos;
        if (p < s_.size() && s_[p] == '-') ++p;
        if (!digit(p)) return std::nullopt;
        if (s_[p] == '0') {
            ++p;
        } else {
            while (digit(p)) ++p;
        }
        bool integral = true;
        if (p < s_.size() && s_[p] == '.') {
            integral = false;
            ++p;
            if (!digit(p)) return std::nullopt;
            while (digit(p)) ++p;
        }
        if (p < s_.size() && (s_[p] == 'e' || s_[p] == 'E')) {
            integral = false;
            ++p;
            if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
            if (!digit(p)) return std::nullopt;
            while (digit(p)) ++p;
        }
        const std::string_view lexeme = s_.substr(start, p - start);
        pos = p;
        if (integral) {
            std::int64_t i = 0;
            auto [ptr, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), i);
            if (ec == std::errc{} && ptr == lexeme.data() + lexeme.size()) return ojson(i);
        }
        const double d = std::strtod(std::string(lexeme).c_str(), nullptr);
        if (!std::isfinite(d)) return std::nullopt;  // JSON has no infinities
        return ojson(d);
    }

    std::string_view s_;
};

// End of the brace-balanced region starting at `pos`, honouring string
// literals (which also end at a raw control character). npos if unbalanced.
std::size_t balanced_end(std::string_view s, std::size_t pos) {
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = pos; i < s.size(); ++i) {
        char c = s[i];
        if (in_string) {
            if (c == '\\') {
                ++i;
            } else if (c == '"' || static_cast<unsigned char>(c) < 0x20) {
                in_string = false;
            }
            continue;
        }
        if (c == '"') {
            in_string = true;
        } else if (c == '{') {
            ++depth;
        } else if (c == '}') {
            if (--depth == 0) return i + 1;
        }
    }
    return std::string_view::npos;
}

// Spans of the elements of the array at `pos`, which is known to parse.
std::vector<std::pair<std::size_t, std::size_t>> element_spans(std::string_view s, std::size_t pos) {
    Parser parser(s);
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t p = pos + 1;
    parser.skip_ws(p);
    if (p < s.size() && s[p] == ']') return spans;
    while (p < s.size()) {
        parser.skip_ws(p);
        std::size_t start = p;
        if (!parser.value(p, 1)) break;
        spans.emplace_back(start, p);
        parser.skip_ws(p);
        if (p < s.size() && s[p] == ',') {
            ++p;
            continue;
        }
        break;
    }
    return spans;
}

}  // namespace

std::optional<std::string> ExtractedJsonObject::get_string(std::string_view key) const {
    auto it = parsed.find(std::string(key));
    if (it == parsed.end()) return std::nullopt;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number() || it->is_boolean()) return it->dump();
    return std::nullopt;
}

std::map<std::string, std::string> ExtractedJsonObject::to_string_map() const {
    std::map<std::string, std::string> out;
    for (auto it = parsed.begin(); it != parsed.end(); ++it) {
        if (auto v = get_string(it.key())) out.emplace(it.key(), *v);
    }
    return out;
}

std::optional<nlohmann::ordered_json> parse_json_value(std::string_view text, std::size_t pos,
                                                       std::size_t& end) {
    Parser parser(text);
    std::size_t p = pos;
    auto v = parser.value(p, 0);
    if (v) end = p;
    return v;
}

std::vector<ExtractedJsonObject> find_json_objects(std::string_view llm_text) {
    std::vector<ExtractedJsonObject> out;
    Parser parser(llm_text);
    std::size_t pos = 0;
    while (pos < llm_text.size()) {
        pos = llm_text.find_first_of("{[", pos);
        if (pos == std::string_view::npos) break;

        std::size_t end = pos;
        auto v = parser.value(end, 0);
        if (llm_text[pos] == '{') {
            if (v) {
                out.push_back({std::string(llm_text.substr(pos, end - pos)), pos, std::move(*v), false});
                pos = end;
            } else {
                std::size_t skip = balanced_end(llm_text, pos);
                pos = skip == std::string_view::npos ? pos + 1 : skip;
            }
            continue;
        }

        if (!v) {
            ++pos;
            continue;
        }
        const bool all_objects =
            !v->empty() && std::all_of(v->begin(), v->end(), [](const ojson& e) { return e.is_object(); });
        if (all_objects) {
            std::size_t i = 0;
            for (auto [b, e] : element_spans(llm_text, pos)) {
                out.push_back({std::string(llm_text.substr(b, e - b)), b, (*v)[i++], true});
            }
        }
        pos = end;
    }
    return out;
}

std::vector<ExtractedJsonObject> extract_json_objects(std::string_view llm_text) {
    auto out = find_json_objects(llm_text);
    if (out.empty()) throw Error(Errc::NoJsonFound, "no JSON object found in model output");
    return out;
}

std::optional<std::vector<std::string>> extract_string_array(std::string_view llm_text) {
    auto as_strings = [](const ojson& arr) -> std::optional<std::vector<std::string>> {
        if (!arr.is_array()) return std::nullopt;
        std::vector<std::string> out;
        for (const auto& e : arr) {
            if (!e.is_string()) return std::nullopt;
            out.push_back(e.get<std::string>());
        }
        return out;
    };

    Parser parser(llm_text);
    std::optional<std::vector<std::string>> from_object;
    std::size_t pos = 0;
    while (pos < llm_text.size()) {
        pos = llm_text.find_first_of("{[", pos);
        if (pos == std::string_view::npos) break;
        std::size_t end = pos;
        auto v = parser.value(end, 0);
        if (!v) {
            ++pos;
            continue;
        }
        if (auto strings = as_strings(*v)) return strings;
        // Models sometimes wrap the list: {"themes": [...]}.
        if (v->is_object() && !from_object) {
            for (const auto& member : *v) {
                if (auto strings = as_strings(member)) {
                    from_object = std::move(strings);
                    break;
                }
            }
        }
        pos = end;
    }
    return from_object;
}

KnowledgeComponent validate_kc_object(const ExtractedJsonObject& obj, std::string_view expected_lang) {
    if (!obj.parsed.is_object()) throw Error(Errc::InvalidArgument, "extracted value is not an object");

    std::vector<std::string> missing;
    for (auto key : kKnowledgeComponentKeys) {
        if (!obj.get_string(key)) missing.emplace_back(key);
    }
    if (!missing.empty()) {
        throw Error(Errc::MissingKey, "concept object lacks: " + text::join(missing, ", "), missing);
    }

    KnowledgeComponent kc;
    kc.theAvatar = *obj.get_string("theAvatar");
    kc.theLang = *obj.get_string("theLang");
    kc.theKC = text::trim(*obj.get_string("theKC"));
    kc.theType = *obj.get_string("theType");
    kc.theTarget = *obj.get_string("theTarget");
    kc.theTutorName = *obj.get_string("theTutorName");
    kc.theContext = *obj.get_string("theContext");
    kc.theEnvironment = *obj.get_string("theEnvironment");
    kc.theUserName = *obj.get_string("theUserName");
    kc.theStyle = *obj.get_string("theStyle");
    kc.theObjective = *obj.get_string("theObjective");

    if (kc.theKC.empty()) throw Error(Errc::InvalidValue, "theKC is blank", {"theKC"});

    const bool english = text::iequals(text::trim(expected_lang), "English") ||
                         text::iequals(text::trim(expected_lang), "en");
    if (english && text::split_words(kc.theKC).size() > 3) {
        kc.warnings.insert(std::string(kc_warning::kLengthViolation));
    }
    if (obj.from_array) kc.warnings.insert(std::string(kc_warning::kFromArray));
    return kc;
}

}  // namespace socratic::prompt
