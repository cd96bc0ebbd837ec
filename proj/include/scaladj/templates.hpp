#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace scaladj {

enum class TemplateCategory { Membership, Intensity };
enum class TemplateDirection { WeakStrong, StrongWeak, None };

/// One probing construction with ADJ_weak / ADJ_strong slots. Direction says
/// which slot order is felicitous for a gold weak<strong pair.
struct Template {
    int id = 0;
    TemplateCategory category = TemplateCategory::Intensity;
    TemplateDirection direction = TemplateDirection::WeakStrong;
    std::string pattern;  // contains {ADJ_weak} and {ADJ_strong}
};

inline constexpr const char* kWeakSlot = "{ADJ_weak}";
inline constexpr const char* kStrongSlot = "{ADJ_strong}";

/// TSV `template_id<TAB>category<TAB>direction<TAB>pattern`. Direction is
/// `-` for membership rows.
std::vector<Template> load_templates(const std::filesystem::path& path);

std::vector<Template> templates_in_category(const std::vector<Template>& all,
                                            TemplateCategory category);

const Template& template_by_id(const std::vector<Template>& templates, int id);

/// Both slots filled with the given surface forms.
std::string instantiate(const Template& t, const std::string& weak_slot_word,
                        const std::string& strong_slot_word);

/// Text up to the ADJ_strong slot, right-trimmed (completion prefix).
std::string instantiate_prefix(const Template& t, const std::string& weak_slot_word);

/// ADJ_strong slot replaced by `mask_token` followed by a comma.
std::string instantiate_masked(const Template& t, const std::string& weak_slot_word,
                               const std::string& mask_token);

}  // namespace scaladj
