#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "socratic/knowledge_component.hpp"

namespace socratic::prompt {

/// A JSON object located inside free-form model output.
struct ExtractedJsonObject {
    std::string raw_span;           // exact bytes of the object in the source text
    std::size_t offset = 0;         // byte offset of raw_span in the source text
    nlohmann::ordered_json parsed;  // always an object
    bool from_array = false;        // unwrapped from a top-level array

    /// Value of `key` as a string: strings verbatim, other scalars serialized.
    /// Empty optional when the key is absent or holds an object/array/null.
    std::optional<std::string> get_string(std::string_view key) const;

    /// The object flattened to key -> string for scalar members.
    std::map<std::string, std::string> to_string_map() const;
};

/// Strict RFC 8259 value parser over `text` starting at `pos`. On success
/// returns the value and sets `end` one past its last byte; whitespace before
/// the value is not skipped. Returns nullopt on any syntax error.
std::optional<nlohmann::ordered_json> parse_json_value(std::string_view text, std::size_t pos,
                                                       std::size_t& end);

/// Every maximal well-formed top-level JSON object in `llm_text`, in order.
/// Prose and code fences around objects are skipped. A top-level array whose
/// elements are all objects is unwrapped and each element flagged `from_array`.
/// Throws Error(NoJsonFound) when nothing parses.
std::vector<ExtractedJsonObject> extract_json_objects(std::string_view llm_text);

/// Non-throwing form; returns an empty list when nothing parses.
std::vector<ExtractedJsonObject> find_json_objects(std::string_view llm_text);

/// The first top-level JSON array whose elements are all strings, or nullopt.
std::optional<std::vector<std::string>> extract_string_array(std::string_view llm_text);

/// Checks the eleven lesson-creation keys. A theKC longer than three words is
/// accepted with kc_warning::kLengthViolation when `expected_lang` is English.
/// Throws Error(MissingKey) listing every absent key, Error(InvalidValue) when
/// theKC is blank.
KnowledgeComponent validate_kc_object(const ExtractedJsonObject& obj, std::string_view expected_lang);

}  // namespace socratic::prompt
