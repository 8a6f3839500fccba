#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace socratic::scenario {

/// Tree levels from broadest to narrowest.
enum class Level { Domain, Subdomain, Objective, Context, Concepts, Target, Environment, Pedagogy };

inline constexpr std::array<Level, 8> kLevels{Level::Domain,   Level::Subdomain, Level::Objective,
                                              Level::Context,  Level::Concepts,  Level::Target,
                                              Level::Environment, Level::Pedagogy};

std::string_view to_string(Level level) noexcept;
/// Accepts the canonical names plus "target learners" / "environments".
std::optional<Level> parse_level(std::string_view s);

/// Selections keyed by level.
using Selections = std::map<Level, std::string>;

/// Parses {"domain": "...", ...}. Throws Error(InvalidValue) on unknown keys.
Selections selections_from_strings(const std::map<std::string, std::string>& raw);

/// Whether a level's candidates come from the model (objective, context, concepts)
/// or from a fixed vocabulary.
bool is_model_expanded(Level level) noexcept;

/// Candidate labels and the current selection for every level.
class CategoryTree {
public:
    /// Tree with the fixed vocabularies filled in and no selections.
    static CategoryTree with_default_vocabulary();

    const std::vector<std::string>& candidates(Level level) const;
    const std::optional<std::string>& selection(Level level) const;

    /// Appends labels not already present (case-sensitive), preserving order.
    void add_candidates(Level level, const std::vector<std::string>& labels);

    /// Throws Error(IncompleteSelection) if any level above `level` is unselected.
    void select(Level level, std::string label);

    /// Levels above `level` that have no selection.
    std::vector<Level> missing_parents(Level level) const;

    Selections selections() const;

    bool operator==(const CategoryTree&) const = default;

private:
    struct Node {
        std::vector<std::string> candidates;
        std::optional<std::string> selection;
        bool operator==(const Node&) const = default;
    };
    std::array<Node, kLevels.size()> nodes_{};
};

}  // namespace socratic::scenario
