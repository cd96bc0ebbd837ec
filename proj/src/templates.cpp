#include "scaladj/templates.hpp"

#include <fstream>
#include <set>

#include "scaladj/error.hpp"
#include "scaladj/util.hpp"

namespace scaladj {

namespace {

std::string replace_once(const std::string& text, const std::string& slot,
                         const std::string& value) {
    auto pos = text.find(slot);
    if (pos == std::string::npos)
        throw ValidationError("template pattern missing slot " + slot + ": " + text);
    return text.substr(0, pos) + value + text.substr(pos + slot.size());
}

}  // namespace

std::vector<Template> load_templates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open template file: " + path.string());

    std::vector<Template> out;
    std::set<std::pair<int, int>> seen;  // (category, id)
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || line.front() == '#') continue;
        auto cols = split(line, '\t');
        if (cols.size() != 4)
            throw ParseError(path.string(), line_no,
                             "expected `template_id<TAB>category<TAB>direction<TAB>pattern`");
        Template t;
        try {
            t.id = std::stoi(trim(cols[0]));
        } catch (...) {
            throw ParseError(path.string(), line_no, "bad template_id '" + cols[0] + "'");
        }
        std::string cat = trim(cols[1]);
        if (cat == "membership") t.category = TemplateCategory::Membership;
        else if (cat == "intensity") t.category = TemplateCategory::Intensity;
        else throw ParseError(path.string(), line_no, "unknown category '" + cat + "'");

        std::string dir = trim(cols[2]);
        if (t.category == TemplateCategory::Membership) {
            if (dir != "-")
                throw ParseError(path.string(), line_no, "membership rows use direction '-'");
            t.direction = TemplateDirection::None;
        } else if (dir == "weak-strong") {
            t.direction = TemplateDirection::WeakStrong;
        } else if (dir == "strong-weak") {
            t.direction = TemplateDirection::StrongWeak;
        } else {
            throw ParseError(path.string(), line_no, "unknown direction '" + dir + "'");
        }

        t.pattern = trim(cols[3]);
        if (t.pattern.find(kWeakSlot) == std::string::npos ||
            t.pattern.find(kStrongSlot) == std::string::npos)
            throw ParseError(path.string(), line_no, "pattern must contain both slots");
        if (!seen.insert({static_cast<int>(t.category), t.id}).second)
            throw ParseError(path.string(), line_no,
                             "duplicate template_id " + std::to_string(t.id) + " in category");
        out.push_back(std::move(t));
    }
    if (out.empty()) throw ValidationError(path.string() + ": no templates");
    return out;
}

std::vector<Template> templates_in_category(const std::vector<Template>& all,
                                            TemplateCategory category) {
    std::vector<Template> out;
    for (const auto& t : all)
        if (t.category == category) out.push_back(t);
    return out;
}

const Template& template_by_id(const std::vector<Template>& templates, int id) {
    for (const auto& t : templates)
        if (t.id == id) return t;
    throw ValidationError("no template with id " + std::to_string(id));
}

std::string instantiate(const Template& t, const std::string& weak_slot_word,
                        const std::string& strong_slot_word) {
    return replace_once(replace_once(t.pattern, kWeakSlot, weak_slot_word), kStrongSlot,
                        strong_slot_word);
}

std::string instantiate_prefix(const Template& t, const std::string& weak_slot_word) {
    std::string filled = replace_once(t.pattern, kWeakSlot, weak_slot_word);
    auto pos = filled.find(kStrongSlot);
    if (pos == std::string::npos)
        throw ValidationError("template pattern missing slot " + std::string(kStrongSlot));
    std::string prefix = filled.substr(0, pos);
    while (!prefix.empty() && prefix.back() == ' ') prefix.pop_back();
    return prefix;
}

std::string instantiate_masked(const Template& t, const std::string& weak_slot_word,
                               const std::string& mask_token) {
    std::string filled = replace_once(t.pattern, kWeakSlot, weak_slot_word);
    return replace_once(filled, kStrongSlot, mask_token + ",");
}

}  // namespace scaladj
