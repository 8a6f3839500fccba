#include "socratic/scenario/matrix.hpp"

#include "socratic/error.hpp"
#include "socratic/text.hpp"

namespace socratic::scenario {

namespace {

std::string cell_key(const CellIndex& idx) {
    return std::to_string(idx.first) + "," + std::to_string(idx.second);
}

CellIndex parse_cell_key(const std::string& key) {
    const auto comma = key.find(',');
    try {
        if (comma == std::string::npos) throw std::invalid_argument(key);
        return {std::stoul(key.substr(0, comma)), std::stoul(key.substr(comma + 1))};
    } catch (const std::exception&) {
        throw Error(Errc::InvalidValue, "bad matrix cell key '" + key + "'");
    }
}

}  // namespace

const std::string* ScenarioMatrix::cell(std::size_t kc_index, WhType wh) const {
    auto it = cells.find({kc_index, static_cast<std::size_t>(wh)});
    return it == cells.end() ? nullptr : &it->second;
}

bool is_valid_cell_question(std::string_view question, WhType wh) {
    const auto q = text::trim(question);
    if (q.empty() || q.back() != '?') return false;
    return contains_wh_word(text::first_sentence(q), wh);
}

nlohmann::ordered_json to_json(const ScenarioMatrix& m) {
    nlohmann::ordered_json j;
    j["kcs"] = nlohmann::ordered_json::array();
    for (const auto& kc : m.kcs) j["kcs"].push_back(to_json(kc));
    j["wh"] = nlohmann::ordered_json::array();
    for (auto wh : m.wh_types) j["wh"].push_back(to_string(wh));
    j["cells"] = nlohmann::ordered_json::object();
    for (const auto& [idx, q] : m.cells) j["cells"][cell_key(idx)] = q;
    j["invalid"] = nlohmann::ordered_json::array();
    for (const auto& idx : m.invalid_cells) j["invalid"].push_back(cell_key(idx));
    return j;
}

ScenarioMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kcs") || !j.contains("cells")) {
        throw Error(Errc::MissingKey, "matrix needs 'kcs' and 'cells'");
    }
    ScenarioMatrix m;
    for (const auto& kc : j.at("kcs")) m.kcs.push_back(knowledge_component_from_json(kc));
    if (auto wh = j.find("wh"); wh != j.end()) {
        if (!wh->is_array() || wh->size() != kWhTypes.size()) throw Error(Errc::InvalidValue, "matrix 'wh' must list five types");
        for (std::size_t i = 0; i < kWhTypes.size(); ++i) {
            auto parsed = parse_wh_type((*wh)[i].get<std::string>());
            if (!parsed || *parsed != kWhTypes[i]) throw Error(Errc::InvalidValue, "matrix 'wh' order differs");
        }
    }
    for (const auto& [key, value] : j.at("cells").items()) {
        auto idx = parse_cell_key(key);
        if (idx.first >= m.kcs.size() || idx.second >= kWhTypes.size()) {
            throw Error(Errc::InvalidValue, "matrix cell '" + key + "' out of range");
        }
        m.cells[idx] = value.get<std::string>();
    }
    if (auto inv = j.find("invalid"); inv != j.end()) {
        for (const auto& key : *inv) m.invalid_cells.insert(parse_cell_key(key.get<std::string>()));
    }
    return m;
}

}  // namespace socratic::scenario
