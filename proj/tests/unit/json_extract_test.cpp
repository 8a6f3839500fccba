#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "socratic/error.hpp"
#include "socratic/prompt/json_extract.hpp"

namespace socratic::prompt {
namespace {

using ojson = nlohmann::ordered_json;

// Random JSON text with varied whitespace, escapes and number forms.
class JsonGen {
public:
    explicit JsonGen(unsigned seed) : rng_(seed) {}

    std::string value(int depth) {
        switch (depth > 3 ? uniform(3, 7) : uniform(0, 7)) {
            case 0:
            case 1: return object(depth);
            case 2: return array(depth);
            case 3: return string();
            case 4: return number();
            case 5: return uniform(0, 1) ? "true" : "false";
            case 6: return "null";
            default: return string();
        }
    }

    std::string object(int depth) {
        const int n = uniform(0, 4);
        std::string out = "{" + ws();
        for (int i = 0; i < n; ++i) {
            if (i) out += "," + ws();
            out += "\"k" + std::to_string(i) + suffix() + "\"" + ws() + ":" + ws() + value(depth + 1) + ws();
        }
        return out + "}";
    }

private:
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::string ws() {
        static const char* kWs[] = {"", "", " ", "\n  ", "\t", "\r\n"};
        return kWs[uniform(0, 5)];
    }

    std::string suffix() {
        static const char* kParts[] = {"", "_x", "\\u00e9", "\\\"q", "{", "}"};
        return kParts[uniform(0, 5)];
    }

    std::string array(int depth) {
        const int n = uniform(0, 4);
        std::string out = "[" + ws();
        for (int i = 0; i < n; ++i) {
            if (i) out += "," + ws();
            out += value(depth + 1);
        }
        return out + ws() + "]";
    }

    std::string string() {
        static const char* kParts[] = {"plain", " ", "{", "}", "[", "]", "\\\"", "\\\\", "\\n", "\\t", "\\/",
                                       "\\u0041", "\\ud83d\\ude00", "caf\xc3\xa9", ",", ":", "```"};
        std::string out = "\"";
        for (int i = uniform(0, 5); i > 0; --i) out += kParts[uniform(0, 16)];
        return out + "\"";
    }

    std::string number() {
        static const char* kNums[] = {"0", "-0", "7", "-12", "3.25", "1e3", "-2.5E-2", "1234567890", "0.5e+1"};
        return kNums[uniform(0, 8)];
    }

    std::mt19937 rng_;
};

TEST(JsonValue, MatchesReferenceParserOnValidInput) {
    JsonGen gen(11);
    for (int i = 0; i < 2000; ++i) {
        const auto text = gen.value(0);
        std::size_t end = 0;
        auto mine = parse_json_value(text, 0, end);
        ASSERT_TRUE(mine.has_value()) << text;
        EXPECT_EQ(end, text.size()) << text;
        EXPECT_EQ(*mine, ojson::parse(text)) << text;
    }
}

TEST(JsonValue, AcceptsExactlyWhatTheReferenceAccepts) {
    JsonGen gen(12);
    std::mt19937 rng(13);
    static const char kBytes[] = "{}[]\",:0123456789.-+eE \\ntfalsenull'x";
    for (int i = 0; i < 3000; ++i) {
        auto text = gen.object(0);
        const auto at = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
        const char byte = kBytes[std::uniform_int_distribution<std::size_t>(0, sizeof kBytes - 2)(rng)];
        switch (rng() % 3) {
            case 0: text[at] = byte; break;
            case 1: text.insert(at, 1, byte); break;
            default: text.erase(at, 1); break;
        }
        const bool reference = ojson::accept(text);
        const auto start = std::min(text.find_first_not_of(" \t\r\n"), text.size());
        std::size_t end = 0;
        auto mine = parse_json_value(text, start, end);
        const bool accepted = mine.has_value() && text.find_first_not_of(" \t\r\n", end) == std::string::npos;
        ASSERT_EQ(accepted, reference) << text;
        if (accepted) {
            EXPECT_EQ(*mine, ojson::parse(text)) << text;
        }
    }
}

TEST(JsonValue, RejectsNonStandardForms) {
    for (const char* bad : {"{'a': 1}", "{a: 1}", "{\"a\": 1,}", "[1,]", "01", "1.", ".5", "+1", "\"\t\"",
                            "\"\\x\"", "\"\\ud800\"", "NaN", "tru", "{\"a\" 1}"}) {
        std::size_t end = 0;
        auto v = parse_json_value(bad, 0, end);
        EXPECT_FALSE(v.has_value() && end == std::string_view(bad).size()) << bad;
    }
}

TEST(Extract, FindsObjectsAroundProseAndFences) {
    const std::string text =
        "Sure! Here is the first:\n```json\n{\"a\": 1}\n```\nand then {\"b\": {\"c\": \"}\"}} done.";
    auto objs = extract_json_objects(text);
    ASSERT_EQ(objs.size(), 2u);
    EXPECT_EQ(objs[0].parsed, ojson::parse("{\"a\":1}"));
    EXPECT_EQ(objs[1].raw_span, "{\"b\": {\"c\": \"}\"}}");
    EXPECT_EQ(text.substr(objs[1].offset, objs[1].raw_span.size()), objs[1].raw_span);
    EXPECT_FALSE(objs[0].from_array);
}

TEST(Extract, MalformedObjectIsSkippedWithItsChildren) {
    auto objs = find_json_objects("{\"a\": {\"x\": 1}, } then {\"ok\": true}");
    ASSERT_EQ(objs.size(), 1u);
    EXPECT_EQ(objs[0].parsed, ojson::parse("{\"ok\":true}"));
}

TEST(Extract, UnbalancedBraceDoesNotHideLaterObjects) {
    auto objs = find_json_objects("oops { never closed, then {\"a\":1} and {\"b\":2}");
    ASSERT_EQ(objs.size(), 2u);
}

TEST(Extract, ArrayOfObjectsIsUnwrapped) {
    auto objs = find_json_objects("[{\"a\":1}, {\"b\":2}] and [1, {\"c\":3}]");
    ASSERT_EQ(objs.size(), 2u);
    EXPECT_TRUE(objs[0].from_array);
    EXPECT_EQ(objs[1].raw_span, "{\"b\":2}");
}

TEST(Extract, NothingFoundThrows) {
    try {
        extract_json_objects("no json here, just {broken");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NoJsonFound);
    }
    EXPECT_TRUE(find_json_objects("").empty());
}

TEST(Extract, GetStringSerializesScalars) {
    auto objs = find_json_objects("{\"s\":\"x\",\"n\":5,\"b\":true,\"o\":{},\"z\":null}");
    ASSERT_EQ(objs.size(), 1u);
    EXPECT_EQ(objs[0].get_string("s"), "x");
    EXPECT_EQ(objs[0].get_string("n"), "5");
    EXPECT_EQ(objs[0].get_string("b"), "true");
    EXPECT_FALSE(objs[0].get_string("o").has_value());
    EXPECT_FALSE(objs[0].get_string("z").has_value());
    EXPECT_FALSE(objs[0].get_string("missing").has_value());
}

TEST(Extract, StringArray) {
    EXPECT_EQ(extract_string_array("Themes: [\"A\", \"B c\"]"), (std::vector<std::string>{"A", "B c"}));
    EXPECT_EQ(extract_string_array("{\"themes\": [\"A\"]}"), (std::vector<std::string>{"A"}));
    EXPECT_FALSE(extract_string_array("[1, 2]").has_value());
    EXPECT_FALSE(extract_string_array("none").has_value());
}

ojson kc_json(const std::string& name) {
    ojson j;
    for (auto key : kKnowledgeComponentKeys) j[std::string(key)] = "v";
    j["theKC"] = name;
    return j;
}

TEST(KcValidation, AcceptsCompleteObject) {
    auto objs = find_json_objects(kc_json("Reinforcement").dump());
    auto kc = validate_kc_object(objs.at(0), "English");
    EXPECT_EQ(kc.theKC, "Reinforcement");
    EXPECT_TRUE(kc.warnings.empty());
}

TEST(KcValidation, LongEnglishNameIsFlagged) {
    auto objs = find_json_objects(kc_json("Very Long Concept Name").dump());
    EXPECT_TRUE(validate_kc_object(objs.at(0), "English").has_warning(kc_warning::kLengthViolation));
    EXPECT_FALSE(validate_kc_object(objs.at(0), "German").has_warning(kc_warning::kLengthViolation));
    auto three = find_json_objects(kc_json("Three Word Name").dump());
    EXPECT_FALSE(validate_kc_object(three.at(0), "en").has_warning(kc_warning::kLengthViolation));
}

TEST(KcValidation, MissingKeysAreListed) {
    auto j = kc_json("X");
    j.erase("theContext");
    j.erase("theStyle");
    try {
        validate_kc_object(find_json_objects(j.dump()).at(0), "English");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingKey);
        EXPECT_EQ(e.details().size(), 2u);
    }
}

TEST(KcValidation, BlankNameRejected) {
    try {
        validate_kc_object(find_json_objects(kc_json("  ").dump()).at(0), "English");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidValue);
    }
}

TEST(KcValidation, ArrayOriginIsRecorded) {
    auto objs = find_json_objects("[" + kc_json("A").dump() + "]");
    EXPECT_TRUE(validate_kc_object(objs.at(0), "English").has_warning(kc_warning::kFromArray));
}

}  // namespace
}  // namespace socratic::prompt
