#include <resat/core/exclusion.hpp>

#include <resat/core/text.hpp>

namespace resat {

const ExclusionRules& ExclusionRules::defaults()
{
    static const ExclusionRules rules;
    return rules;
}

bool glob_match(std::string_view pattern, std::string_view name)
{
    std::size_t p = 0, n = 0;
    std::size_t star = std::string_view::npos, resume = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            resume = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++resume;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*')
        ++p;
    return p == pattern.size();
}

namespace {
std::vector<std::string_view> components(std::string_view path)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto slash = path.find('/', start);
        auto end = slash == std::string_view::npos ? path.size() : slash;
        if (end > start)
            parts.push_back(path.substr(start, end - start));
        if (slash == std::string_view::npos)
            break;
        start = slash + 1;
    }
    return parts;
}
}  // namespace

bool ExclusionRules::is_test_script(std::string_view path) const
{
    auto normalized = text::normalize_path(path);
    auto parts = components(normalized);
    if (parts.empty())
        return false;
    for (auto part : parts) {
        if (test_path_components.count(std::string(part)))
            return true;
    }
    for (const auto& glob : test_basename_globs) {
        if (glob_match(glob, parts.back()))
            return true;
    }
    return false;
}

bool ExclusionRules::has_hidden_component(std::string_view path) const
{
    auto normalized = text::normalize_path(path);
    for (auto part : components(normalized)) {
        if (part.size() > 1 && part.front() == '.' && part != "..")
            return true;
    }
    return false;
}

bool ExclusionRules::is_analyzable(std::string_view path) const
{
    if (!text::ends_with(path, allowed_extension))
        return false;
    if (exclude_hidden && has_hidden_component(path))
        return false;
    return !is_test_script(path);
}

}  // namespace resat
