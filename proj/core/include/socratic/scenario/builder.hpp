#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "socratic/knowledge_component.hpp"
#include "socratic/llm/provider.hpp"
#include "socratic/prompt/template.hpp"
#include "socratic/scenario/category_tree.hpp"
#include "socratic/scenario/matrix.hpp"
#include "socratic/scenario/scenario_spec.hpp"

namespace socratic::scenario {

namespace warning {
inline constexpr std::string_view kShortfall = "shortfall";
inline constexpr std::string_view kArrayUnwrapped = "array_unwrapped";
}  // namespace warning

/// Maps a complete tree selection onto a spec. Fields that have no tree level
/// (language, names, avatar, count, style) come from `defaults`.
/// Throws Error(IncompleteSelection) listing missing levels.
ScenarioSpec build_from_tree(const Selections& selections, const ScenarioDefaults& defaults = {});

/// Asks the model to pull scenario fields out of a free-text request. One
/// repair retry, then Error(ExtractionFailed).
ScenarioSpec build_from_text(std::string_view free_text, llm::Provider& provider,
                             const ScenarioDefaults& defaults = {},
                             const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// Populates candidates for `level` from the model. `parents` are applied as
/// selections first; every level above `level` must then be selected.
CategoryTree expand_tree_level(CategoryTree tree, Level level, const Selections& parents,
                               llm::Provider& provider,
                               const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

struct KcGeneration {
    std::vector<KnowledgeComponent> kcs;
    std::vector<std::string> warnings;
    int provider_calls = 0;
};

/// Renders the lesson-creation prompt and validates the returned concept objects.
/// Returns 1..theNumber components; a shortfall triggers exactly one repair call.
KcGeneration generate_kcs(const ScenarioSpec& spec, llm::Provider& provider,
                          const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

/// One model call per knowledge component requesting all five wh-questions.
/// Non-compliant cells are re-requested once, then recorded as invalid.
ScenarioMatrix generate_matrix(const ScenarioSpec& spec, const std::vector<KnowledgeComponent>& kcs,
                               llm::Provider& provider,
                               const prompt::TemplateLibrary& templates = prompt::TemplateLibrary::bundled());

}  // namespace socratic::scenario
