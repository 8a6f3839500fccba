#include "socratic/knowledge_component.hpp"

#include "socratic/error.hpp"

namespace socratic {

namespace {

template <typename F>
void for_each_field(KnowledgeComponent& kc, F&& f) {
    f("theAvatar", kc.theAvatar);
    f("theLang", kc.theLang);
    f("theKC", kc.theKC);
    f("theType", kc.theType);
    f("theTarget", kc.theTarget);
    f("theTutorName", kc.theTutorName);
    f("theContext", kc.theContext);
    f("theEnvironment", kc.theEnvironment);
    f("theUserName", kc.theUserName);
    f("theStyle", kc.theStyle);
    f("theObjective", kc.theObjective);
}

}  // namespace

nlohmann::ordered_json to_json(const KnowledgeComponent& kc) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    auto copy = kc;
    for_each_field(copy, [&](const char* key, std::string& value) { j[key] = value; });
    if (!kc.warnings.empty()) j["warnings"] = kc.warnings;
    return j;
}

KnowledgeComponent knowledge_component_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(Errc::InvalidValue, "knowledge component must be a JSON object");
    KnowledgeComponent kc;
    std::vector<std::string> missing;
    for_each_field(kc, [&](const char* key, std::string& value) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_string()) {
            missing.emplace_back(key);
            return;
        }
        value = it->get<std::string>();
    });
    if (!missing.empty()) throw Error(Errc::MissingKey, "knowledge component is missing keys", missing);
    if (auto it = j.find("warnings"); it != j.end() && it->is_array()) {
        for (const auto& w : *it) kc.warnings.insert(w.get<std::string>());
    }
    return kc;
}

}  // namespace socratic
