#pragma once

#include <array>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace socratic {

/// The keys of the lesson-creation JSON contract, in the order the template lists them.
inline constexpr std::array<std::string_view, 11> kKnowledgeComponentKeys{
    "theAvatar", "theLang",        "theKC",       "theType",  "theTarget",    "theTutorName",
    "theContext", "theEnvironment", "theUserName", "theStyle", "theObjective"};

namespace kc_warning {
inline constexpr std::string_view kLengthViolation = "length_violation";
inline constexpr std::string_view kFromArray = "array_unwrapped";
}  // namespace kc_warning

/// One concept object produced by the lesson-creation prompt.
struct KnowledgeComponent {
    std::string theAvatar;
    std::string theLang;
    std::string theKC;
    std::string theType;
    std::string theTarget;
    std::string theTutorName;
    std::string theContext;
    std::string theEnvironment;
    std::string theUserName;
    std::string theStyle;
    std::string theObjective;
    std::set<std::string> warnings;

    bool has_warning(std::string_view w) const { return warnings.count(std::string(w)) != 0; }

    bool operator==(const KnowledgeComponent&) const = default;
};

nlohmann::ordered_json to_json(const KnowledgeComponent& kc);

/// Inverse of to_json. Throws Error(MissingKey) when a contract key is absent.
KnowledgeComponent knowledge_component_from_json(const nlohmann::json& j);

}  // namespace socratic
