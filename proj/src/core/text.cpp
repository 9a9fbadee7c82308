#include <resat/core/text.hpp>

#include <cstdint>

namespace resat::text {

std::vector<std::string> split_lines(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        lines.emplace_back(text.substr(start, nl - start + 1));
        start = nl + 1;
    }
    return lines;
}

std::vector<std::string> split_lines_bare(std::string_view text)
{
    auto lines = split_lines(text);
    for (auto& line : lines) {
        if (!line.empty() && line.back() == '\n')
            line.pop_back();
    }
    return lines;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i != 0)
            out += sep;
        out += parts[i];
    }
    return out;
}

namespace {
bool is_space(char c)
{
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}
}  // namespace

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front()))
        s.remove_prefix(1);
    return rtrim(s);
}

std::string_view rtrim(std::string_view s)
{
    while (!s.empty() && is_space(s.back()))
        s.remove_suffix(1);
    return s;
}

bool starts_with(std::string_view s, std::string_view prefix)
{
    return s.substr(0, prefix.size()) == prefix;
}

bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::vector<std::size_t> find_all(std::string_view haystack, std::string_view needle)
{
    std::vector<std::size_t> hits;
    if (needle.empty())
        return hits;
    for (auto pos = haystack.find(needle); pos != std::string_view::npos;
         pos = haystack.find(needle, pos + 1))
        hits.push_back(pos);
    return hits;
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle)
{
    return find_all(haystack, needle).size();
}

std::string normalize_path(std::string_view path)
{
    std::string out;
    out.reserve(path.size());
    for (char c : path) {
        char ch = c == '\\' ? '/' : c;
        if (ch == '/' && !out.empty() && out.back() == '/')
            continue;
        out += ch;
    }
    while (starts_with(out, "./"))
        out.erase(0, 2);
    return out;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed)
{
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace resat::text
