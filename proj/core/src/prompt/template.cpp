#include "socratic/prompt/template.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "socratic/error.hpp"
#include "socratic/text.hpp"

namespace socratic::prompt {

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_template_sources();
}

namespace {

bool valid_name(std::string_view name) {
    if (name.empty()) return false;
    if (name.find(kOpenDelimiter) != std::string_view::npos) return false;
    if (name.find(kCloseDelimiter) != std::string_view::npos) return false;
    return std::none_of(name.begin(), name.end(),
                        [](unsigned char c) { return std::isspace(c) != 0; });
}

}  // namespace

VariableSet::VariableSet(std::initializer_list<std::pair<const std::string, std::string>> init) {
    for (const auto& [k, v] : init) set(k, v);
}

VariableSet& VariableSet::set(std::string name, std::string value) {
    if (text::trim(value).empty()) {
        throw Error(Errc::InvalidArgument, "variable '" + name + "' has a blank value", {name});
    }
    bindings_.insert_or_assign(std::move(name), std::move(value));
    return *this;
}

bool VariableSet::contains(std::string_view name) const { return bindings_.find(name) != bindings_.end(); }

const std::string* VariableSet::find(std::string_view name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
}

PromptTemplate PromptTemplate::parse(std::string text, std::string id) {
    if (text.empty()) throw Error(Errc::InvalidArgument, "template text is empty");

    PromptTemplate t;
    t.id_ = std::move(id);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t open = text.find(kOpenDelimiter, pos);
        if (open == std::string::npos) {
            t.segments_.push_back({false, text.substr(pos)});
            break;
        }
        std::size_t name_start = open + kOpenDelimiter.size();
        std::size_t close = text.find(kCloseDelimiter, name_start);
        if (close == std::string::npos) {
            throw Error(Errc::MalformedPlaceholder,
                        "unterminated placeholder at byte " + std::to_string(open));
        }
        std::string name = text.substr(name_start, close - name_start);
        if (!valid_name(name)) {
            throw Error(Errc::MalformedPlaceholder,
                        "invalid placeholder name '" + name + "' at byte " + std::to_string(open));
        }
        if (open > pos) t.segments_.push_back({false, text.substr(pos, open - pos)});
        if (std::find(t.placeholders_.begin(), t.placeholders_.end(), name) == t.placeholders_.end()) {
            t.placeholders_.push_back(name);
        }
        t.segments_.push_back({true, std::move(name)});
        pos = close + kCloseDelimiter.size();
    }
    t.raw_text_ = std::move(text);
    return t;
}

bool PromptTemplate::has_placeholder(std::string_view name) const {
    return std::find(placeholders_.begin(), placeholders_.end(), name) != placeholders_.end();
}

PromptTemplate parse_template(std::string_view text) { return PromptTemplate::parse(std::string(text)); }

RenderedPrompt render(const PromptTemplate& tmpl, const VariableSet& vars) {
    std::vector<std::string> missing;
    for (const auto& name : tmpl.placeholders()) {
        if (!vars.contains(name)) missing.push_back(name);
    }
    if (!missing.empty()) {
        throw Error(Errc::MissingVariable, "unbound placeholders: " + text::join(missing, ", "), missing);
    }

    RenderedPrompt out;
    out.source_template_id = tmpl.id();
    out.text.reserve(tmpl.raw_text().size());
    for (const auto& seg : tmpl.segments_) {
        if (!seg.is_placeholder) {
            out.text += seg.value;
            continue;
        }
        const std::string& value = *vars.find(seg.value);
        out.text += value;
        if (!out.bindings_used.contains(seg.value)) out.bindings_used.set(seg.value, value);
    }
    return out;
}

const TemplateLibrary& TemplateLibrary::bundled() {
    static const TemplateLibrary library = [] {
        TemplateLibrary lib;
        for (const auto& [id, source] : detail::bundled_template_sources()) {
            lib.add(PromptTemplate::parse(std::string(source), std::string(id)));
        }
        return lib;
    }();
    return library;
}

void TemplateLibrary::add(PromptTemplate tmpl) {
    std::string id = tmpl.id();
    if (id.empty()) throw Error(Errc::InvalidArgument, "template id is empty");
    templates_.insert_or_assign(std::move(id), std::move(tmpl));
}

void TemplateLibrary::load_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::directory_iterator it(dir, ec);
    if (ec) throw Error(Errc::IoError, "cannot read template directory " + dir.string() + ": " + ec.message());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : it) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::IoError, "cannot open template " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        add(PromptTemplate::parse(ss.str(), path.stem().string()));
    }
}

bool TemplateLibrary::contains(std::string_view id) const { return templates_.find(id) != templates_.end(); }

const PromptTemplate& TemplateLibrary::get(std::string_view id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw Error(Errc::UnknownTemplate, "no template named '" + std::string(id) + "'");
    return it->second;
}

std::vector<std::string> TemplateLibrary::ids() const {
    std::vector<std::string> out;
    for (const auto& [id, _] : templates_) out.push_back(id);
    return out;
}

}  // namespace socratic::prompt
