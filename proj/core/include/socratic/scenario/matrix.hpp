#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "socratic/knowledge_component.hpp"
#include "socratic/wh.hpp"

namespace socratic::scenario {

/// (kc row, wh column)
using CellIndex = std::pair<std::size_t, std::size_t>;

/// Opening questions indexed by knowledge component and wh-type.
struct ScenarioMatrix {
    std::vector<KnowledgeComponent> kcs;
    std::array<WhType, 5> wh_types = kWhTypes;
    std::map<CellIndex, std::string> cells;
    std::set<CellIndex> invalid_cells;  // rejected twice, left empty

    const std::string* cell(std::size_t kc_index, WhType wh) const;

    bool operator==(const ScenarioMatrix&) const = default;
};

/// A question is admissible for column `wh` when its first sentence contains
/// that wh-word and the question ends with '?'.
bool is_valid_cell_question(std::string_view question, WhType wh);

/// {kcs: [...], wh: [...], cells: {"r,c": "..."}, invalid: ["r,c", ...]}
nlohmann::ordered_json to_json(const ScenarioMatrix& m);
/// Throws Error(InvalidValue) / Error(MissingKey).
ScenarioMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace socratic::scenario
