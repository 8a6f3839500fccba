#include "socratic/scenario/category_tree.hpp"

#include <algorithm>

#include "socratic/error.hpp"
#include "socratic/scenario/scenario_spec.hpp"
#include "socratic/text.hpp"

namespace socratic::scenario {

namespace {

std::size_t slot(Level level) { return static_cast<std::size_t>(level); }

}  // namespace

std::string_view to_string(Level level) noexcept {
    switch (level) {
        case Level::Domain: return "domain";
        case Level::Subdomain: return "subdomain";
        case Level::Objective: return "objective";
        case Level::Context: return "context";
        case Level::Concepts: return "concepts";
        case Level::Target: return "target";
        case Level::Environment: return "environment";
        case Level::Pedagogy: return "pedagogy";
    }
    return "domain";
}

std::optional<Level> parse_level(std::string_view s) {
    const auto key = text::to_lower(text::trim(s));
    for (auto level : kLevels) {
        if (key == to_string(level)) return level;
    }
    if (key == "target learners" || key == "target_learners" || key == "targets") return Level::Target;
    if (key == "environments") return Level::Environment;
    if (key == "concept") return Level::Concepts;
    return std::nullopt;
}

Selections selections_from_strings(const std::map<std::string, std::string>& raw) {
    Selections out;
    for (const auto& [k, v] : raw) {
        auto level = parse_level(k);
        if (!level) throw Error(Errc::InvalidValue, "unknown tree level '" + k + "'", {k});
        out[*level] = v;
    }
    return out;
}

bool is_model_expanded(Level level) noexcept {
    return level == Level::Objective || level == Level::Context || level == Level::Concepts;
}

CategoryTree CategoryTree::with_default_vocabulary() {
    CategoryTree tree;
    tree.nodes_[slot(Level::Domain)].candidates = {"Psychology", "Computer Science", "Business",
                                                  "Education", "Language Learning", "Mathematics"};
    tree.nodes_[slot(Level::Subdomain)].candidates = {
        "Educational Psychology", "Cognitive Psychology", "Developmental Psychology", "Software Engineering",
        "Data Science", "Marketing", "Second Language Acquisition", "Academic Writing"};
    tree.nodes_[slot(Level::Target)].candidates = {"College Students", "Graduate Students",
                                                  "High School Students", "Online Learners", "Adult Learners"};
    tree.nodes_[slot(Level::Environment)].candidates = {"Online Discussions", "Online Learning", "Classroom",
                                                       "Self-paced Study", "Blended Learning"};
    for (const auto& p : list_pedagogies()) {
        tree.nodes_[slot(Level::Pedagogy)].candidates.emplace_back(p.name);
    }
    return tree;
}

const std::vector<std::string>& CategoryTree::candidates(Level level) const {
    return nodes_[slot(level)].candidates;
}

const std::optional<std::string>& CategoryTree::selection(Level level) const {
    return nodes_[slot(level)].selection;
}

void CategoryTree::add_candidates(Level level, const std::vector<std::string>& labels) {
    auto& list = nodes_[slot(level)].candidates;
    for (const auto& label : labels) {
        if (std::find(list.begin(), list.end(), label) == list.end()) list.push_back(label);
    }
}

void CategoryTree::select(Level level, std::string label) {
    auto missing = missing_parents(level);
    if (!missing.empty()) {
        std::vector<std::string> names;
        for (auto l : missing) names.emplace_back(to_string(l));
        throw Error(Errc::IncompleteSelection,
                    "cannot select " + std::string(to_string(level)) + " before " + text::join(names, ", "), names);
    }
    if (text::trim(label).empty()) throw Error(Errc::InvalidValue, "selection label is blank");
    nodes_[slot(level)].selection = std::move(label);
}

std::vector<Level> CategoryTree::missing_parents(Level level) const {
    std::vector<Level> missing;
    for (auto l : kLevels) {
        if (slot(l) >= slot(level)) break;
        if (!nodes_[slot(l)].selection) missing.push_back(l);
    }
    return missing;
}

Selections CategoryTree::selections() const {
    Selections out;
    for (auto l : kLevels) {
        if (const auto& s = nodes_[slot(l)].selection) out[l] = *s;
    }
    return out;
}

}  // namespace socratic::scenario
