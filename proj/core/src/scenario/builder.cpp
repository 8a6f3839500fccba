#include "socratic/scenario/builder.hpp"

#include <algorithm>
#include <set>

#include "socratic/error.hpp"
#include "socratic/prompt/json_extract.hpp"
#include "socratic/text.hpp"

namespace socratic::scenario {

namespace {

using llm::ChatRequest;
using llm::Role;

std::string pick(const std::optional<std::string>& value, const std::string& fallback) {
    if (value) {
        auto v = text::trim(*value);
        if (!v.empty()) return v;
    }
    return fallback;
}

// Re-asks once with the previous reply in context.
ChatRequest repair_request(const ChatRequest& original, const std::string& reply, std::string instruction) {
    ChatRequest req = original;
    req.messages.push_back({Role::Assistant, reply.empty() ? std::string("(empty reply)") : reply});
    req.messages.push_back({Role::User, std::move(instruction)});
    return req;
}

const std::string kSystemPrompt =
    "You are an instructional designer who builds Socratic learning scenarios. Follow the output format exactly.";

}  // namespace

ScenarioSpec build_from_tree(const Selections& selections, const ScenarioDefaults& defaults) {
    std::vector<std::string> missing;
    for (auto level : kLevels) {
        auto it = selections.find(level);
        if (it == selections.end() || text::trim(it->second).empty()) missing.emplace_back(to_string(level));
    }
    if (!missing.empty()) {
        throw Error(Errc::IncompleteSelection, "missing selections: " + text::join(missing, ", "), missing);
    }

    const auto& pedagogy_label = selections.at(Level::Pedagogy);
    auto pedagogy = parse_pedagogy(pedagogy_label);
    if (!pedagogy) throw Error(Errc::InvalidValue, "unknown pedagogy '" + pedagogy_label + "'", {"pedagogy"});

    ScenarioSpec spec;
    spec.theDomain = text::trim(selections.at(Level::Domain));
    spec.subdomain = text::trim(selections.at(Level::Subdomain));
    spec.theObjective = text::trim(selections.at(Level::Objective));
    spec.theContext = text::trim(selections.at(Level::Context));
    spec.theKC = text::trim(selections.at(Level::Concepts));
    spec.theTarget = text::trim(selections.at(Level::Target));
    spec.theEnvironment = text::trim(selections.at(Level::Environment));
    spec.theType = *pedagogy;
    spec.theLang = defaults.theLang;
    spec.theUserName = defaults.theUserName;
    spec.theTutorName = defaults.theTutorName;
    spec.theAvatar = defaults.theAvatar;
    spec.theNumber = defaults.theNumber;
    spec.theStyle = defaults.theStyle;
    spec.validate();
    return spec;
}

ScenarioSpec build_from_text(std::string_view free_text, llm::Provider& provider, const ScenarioDefaults& defaults,
                             const prompt::TemplateLibrary& templates) {
    const auto trimmed = text::trim(free_text);
    if (trimmed.empty()) throw Error(Errc::InvalidArgument, "free-text description is empty");

    const auto rendered =
        prompt::render(templates.get(prompt::template_id::kScenarioExtraction), {{"theText", trimmed}});
    auto request = llm::make_request(kSystemPrompt, rendered.text, llm::kExtractionTemperature);

    auto reply = provider.complete(request).text;
    auto objects = prompt::find_json_objects(reply);
    if (objects.empty()) {
        request = repair_request(request, reply,
                                 "Your reply did not contain a JSON object. Reply with only one JSON object "
                                 "using the keys listed above.");
        reply = provider.complete(request).text;
        objects = prompt::find_json_objects(reply);
        if (objects.empty()) throw Error(Errc::ExtractionFailed, "model returned no scenario object after a retry");
    }
    const auto& obj = objects.front();

    ScenarioSpec spec;
    spec.theLang = pick(obj.get_string("theLang"), defaults.theLang);
    spec.theDomain = pick(obj.get_string("theDomain"), defaults.theDomain);
    spec.theTarget = pick(obj.get_string("theTarget"), defaults.theTarget);
    spec.theAvatar = pick(obj.get_string("theAvatar"), defaults.theAvatar);
    spec.theTutorName = pick(obj.get_string("theTutorName"), defaults.theTutorName);
    spec.theEnvironment = pick(obj.get_string("theEnvironment"), defaults.theEnvironment);
    spec.theUserName = pick(obj.get_string("theUserName"), defaults.theUserName);
    spec.theStyle = pick(obj.get_string("theStyle"), defaults.theStyle);
    // Topic fields fall back on each other before the domain.
    spec.theKC = pick(obj.get_string("theKC"), pick(obj.get_string("theContext"), spec.theDomain));
    spec.theContext = pick(obj.get_string("theContext"), spec.theKC);
    spec.theObjective = pick(obj.get_string("theObjective"), "Understand " + spec.theKC);

    spec.theNumber = defaults.theNumber;
    if (auto n = obj.get_string("theNumber")) {
        try {
            spec.theNumber = std::clamp(std::stoi(*n), 1, kMaxConcepts);
        } catch (const std::exception&) {
        }
    }
    spec.theType = defaults.theType;
    if (auto t = obj.get_string("theType")) {
        if (auto p = parse_pedagogy(*t)) spec.theType = *p;
    }
    spec.validate();
    return spec;
}

CategoryTree expand_tree_level(CategoryTree tree, Level level, const Selections& parents, llm::Provider& provider,
                               const prompt::TemplateLibrary& templates) {
    for (auto l : kLevels) {
        if (static_cast<int>(l) >= static_cast<int>(level)) break;
        if (auto it = parents.find(l); it != parents.end()) tree.select(l, it->second);
    }
    if (auto missing = tree.missing_parents(level); !missing.empty()) {
        std::vector<std::string> names;
        for (auto l : missing) names.emplace_back(to_string(l));
        throw Error(Errc::IncompleteSelection,
                    "expanding " + std::string(to_string(level)) + " needs " + text::join(names, ", "), names);
    }

    std::string chosen;
    for (const auto& [l, label] : tree.selections()) {
        if (static_cast<int>(l) >= static_cast<int>(level)) break;
        chosen += "- " + std::string(to_string(l)) + ": " + label + "\n";
    }
    if (chosen.empty()) chosen = "(nothing chosen yet)";

    const auto rendered = prompt::render(templates.get(prompt::template_id::kTreeExpansion),
                                         {{"theSelections", chosen}, {"theLevel", std::string(to_string(level))}});
    auto request = llm::make_request(kSystemPrompt, rendered.text, llm::kDialogueTemperature);
    auto reply = provider.complete(request).text;
    auto labels = prompt::extract_string_array(reply);
    if (!labels) {
        request = repair_request(request, reply, "Reply with only one JSON array of strings.");
        reply = provider.complete(request).text;
        labels = prompt::extract_string_array(reply);
        if (!labels) throw Error(Errc::ExtractionFailed, "model returned no label array after a retry");
    }

    std::vector<std::string> cleaned;
    for (const auto& label : *labels) {
        auto t = text::collapse_whitespace(label);
        if (!t.empty()) cleaned.push_back(std::move(t));
    }
    tree.add_candidates(level, cleaned);
    return tree;
}

KcGeneration generate_kcs(const ScenarioSpec& spec, llm::Provider& provider,
                          const prompt::TemplateLibrary& templates) {
    spec.validate();
    const auto rendered = prompt::render(templates.get(prompt::template_id::kLessonCreation), spec.variables());
    auto request = llm::make_request(kSystemPrompt, rendered.text, llm::kExtractionTemperature);
    request.max_tokens = 4096;

    KcGeneration out;
    std::set<std::string> seen;
    bool unwrapped = false;
    const auto wanted = static_cast<std::size_t>(spec.theNumber);
    auto collect = [&](const std::string& reply) {
        for (const auto& obj : prompt::find_json_objects(reply)) {
            if (out.kcs.size() >= wanted) break;
            try {
                auto kc = prompt::validate_kc_object(obj, spec.theLang);
                if (!seen.insert(text::to_lower(kc.theKC)).second) continue;
                unwrapped = unwrapped || obj.from_array;
                out.kcs.push_back(std::move(kc));
            } catch (const Error& e) {
                if (e.code() != Errc::MissingKey && e.code() != Errc::InvalidValue) throw;
            }
        }
    };

    auto reply = provider.complete(request).text;
    ++out.provider_calls;
    collect(reply);

    if (out.kcs.size() < wanted) {
        const auto have = out.kcs.size();
        std::string known;
        for (const auto& kc : out.kcs) known += (known.empty() ? "" : ", ") + kc.theKC;
        std::string instruction = "Only " + std::to_string(have) + " valid concept objects were received but " +
                                  std::to_string(wanted) + " were requested. Give " + std::to_string(wanted - have) +
                                  " more concepts, each in its own pure json object with all eleven keys of the "
                                  "format above.";
        if (!known.empty()) instruction += " Do not repeat: " + known + ".";
        reply = provider.complete(repair_request(request, reply, std::move(instruction))).text;
        ++out.provider_calls;
        collect(reply);
    }

    if (out.kcs.empty()) throw Error(Errc::NoJsonFound, "no valid concept objects after a retry");
    if (out.kcs.size() < wanted) out.warnings.emplace_back(warning::kShortfall);
    if (unwrapped) out.warnings.emplace_back(warning::kArrayUnwrapped);
    return out;
}

ScenarioMatrix generate_matrix(const ScenarioSpec& spec, const std::vector<KnowledgeComponent>& kcs,
                               llm::Provider& provider, const prompt::TemplateLibrary& templates) {
    if (kcs.empty()) throw Error(Errc::InvalidArgument, "matrix generation needs at least one knowledge component");
    spec.validate();

    ScenarioMatrix matrix;
    matrix.kcs = kcs;
    const auto& tmpl = templates.get(prompt::template_id::kMatrixQuestions);

    auto request_cells = [&](std::size_t row, const std::vector<WhType>& wanted) {
        auto vars = spec.variables();
        const auto& kc = kcs[row];
        vars.set("theKC", pick(kc.theKC, spec.theKC));
        vars.set("theContext", pick(kc.theContext, spec.theContext));
        vars.set("theObjective", pick(kc.theObjective, spec.theObjective));
        std::vector<std::string> names;
        for (auto wh : wanted) names.emplace_back(to_string(wh));
        vars.set("theWhTypes", text::join(names, ", "));
        const auto reply =
            provider.complete(llm::make_request(kSystemPrompt, prompt::render(tmpl, vars).text,
                                                llm::kDialogueTemperature))
                .text;

        std::vector<WhType> failed;
        const auto objects = prompt::find_json_objects(reply);
        for (auto wh : wanted) {
            std::optional<std::string> question;
            for (const auto& obj : objects) {
                for (auto it = obj.parsed.begin(); it != obj.parsed.end() && !question; ++it) {
                    if (parse_wh_type(it.key()) == wh && it->is_string()) question = text::trim(it->get<std::string>());
                }
                if (question) break;
            }
            if (question && is_valid_cell_question(*question, wh)) {
                matrix.cells[{row, static_cast<std::size_t>(wh)}] = *question;
            } else {
                failed.push_back(wh);
            }
        }
        return failed;
    };

    for (std::size_t row = 0; row < kcs.size(); ++row) {
        auto failed = request_cells(row, {kWhTypes.begin(), kWhTypes.end()});
        if (!failed.empty()) failed = request_cells(row, failed);
        for (auto wh : failed) matrix.invalid_cells.insert({row, static_cast<std::size_t>(wh)});
    }
    return matrix;
}

}  // namespace socratic::scenario
