#include <resat/editfmt/search_replace.hpp>

#include <resat/core/text.hpp>
#include <resat/editfmt/line_diff.hpp>

#include <algorithm>
#include <set>

namespace resat::editfmt {

MalformedEdit::MalformedEdit(std::size_t line_no_, std::string expected_)
    : EditError("malformed edit at line " + std::to_string(line_no_) + ": expected " + expected_)
    , line_no(line_no_)
    , expected(std::move(expected_))
{
}

SearchNotFound::SearchNotFound(std::string path_, std::size_t edit_index_)
    : EditError("search text of edit " + std::to_string(edit_index_) + " not found in " + path_)
    , path(std::move(path_))
    , edit_index(edit_index_)
{
}

AmbiguousMatch::AmbiguousMatch(std::string path_, std::size_t edit_index_, std::size_t match_count_)
    : EditError("search text of edit " + std::to_string(edit_index_) + " matches "
                + std::to_string(match_count_) + " times in " + path_)
    , path(std::move(path_))
    , edit_index(edit_index_)
    , match_count(match_count_)
{
}

UnknownPath::UnknownPath(std::string path_)
    : EditError("edit targets unknown path " + path_)
    , path(std::move(path_))
{
}

namespace {

struct Window {
    std::size_t lo = 0;
    std::size_t hi = 0;
    std::size_t first_region = 0;
    std::size_t last_region = 0;
};

std::string slice(const std::vector<std::string>& lines, std::size_t lo, std::size_t hi)
{
    std::string out;
    for (std::size_t i = lo; i < hi; ++i)
        out += lines[i];
    return out;
}

void grow(Window& w, std::size_t line_count)
{
    if (w.lo > 0)
        --w.lo;
    if (w.hi < line_count)
        ++w.hi;
}

// Merges windows that overlap or touch. Returns true if anything merged.
bool coalesce(std::vector<Window>& windows)
{
    bool merged = false;
    std::vector<Window> out;
    for (const auto& w : windows) {
        if (!out.empty() && w.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, w.hi);
            out.back().last_region = w.last_region;
            merged = true;
        } else {
            out.push_back(w);
        }
    }
    windows = std::move(out);
    return merged;
}

std::vector<SearchReplaceEdit> edits_for_file(const std::string& path, const std::string& before,
                                              const std::string& after)
{
    const auto old_lines = text::split_lines(before);
    const auto new_lines = text::split_lines(after);
    const auto regions = diff_lines(old_lines, new_lines);
    if (regions.empty())
        return {};
    if (old_lines.empty())
        throw std::invalid_argument("cannot express an edit to empty file " + path);

    const std::size_t n = old_lines.size();
    std::vector<Window> windows;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const auto& r = regions[i];
        if (!windows.empty() && r.old_begin - windows.back().hi <= 2) {
            windows.back().hi = r.old_end;
            windows.back().last_region = i;
        } else {
            windows.push_back({r.old_begin, r.old_end, i, i});
        }
    }
    for (auto& w : windows) {
        if (w.lo == w.hi) {
            if (w.lo > 0)
                --w.lo;
            else
                ++w.hi;
        }
    }

    auto replacement = [&](const Window& w) {
        const auto& first = regions[w.first_region];
        const auto& last = regions[w.last_region];
        std::size_t new_lo = first.new_begin - (first.old_begin - w.lo);
        std::size_t new_hi = last.new_end + (w.hi - last.old_end);
        return slice(new_lines, new_lo, new_hi);
    };

    for (;;) {
        for (auto& w : windows) {
            while (text::count_occurrences(before, slice(old_lines, w.lo, w.hi)) != 1)
                grow(w, n);
        }
        if (coalesce(windows))
            continue;

        // Later searches must also stay unique once earlier edits are applied.
        std::string current = before;
        bool stable = true;
        for (auto& w : windows) {
            auto search = slice(old_lines, w.lo, w.hi);
            auto hits = text::find_all(current, search);
            if (hits.size() != 1) {
                grow(w, n);
                stable = false;
                break;
            }
            current.replace(hits.front(), search.size(), replacement(w));
        }
        if (!stable) {
            coalesce(windows);
            continue;
        }
        break;
    }

    std::vector<SearchReplaceEdit> edits;
    for (const auto& w : windows)
        edits.push_back({path, slice(old_lines, w.lo, w.hi), replacement(w), std::nullopt});
    return edits;
}

void render_section(std::string& out, const std::string& body)
{
    out += body;
    if (!body.empty() && body.back() != '\n') {
        out += '\n';
        out += kNoNewlineMarker;
        out += '\n';
    }
}

bool is_padded_marker(std::string_view line)
{
    auto t = text::trim(line);
    return t != line && (t == kSearchMarker || t == kDividerMarker || t == kReplaceMarker);
}

}  // namespace

EditScript serialize_edits(const FileMap& before, const FileMap& after)
{
    EditScript script;
    for (const auto& [path, old_text] : before) {
        auto it = after.find(path);
        if (it == after.end())
            continue;
        auto edits = edits_for_file(path, old_text, it->second);
        script.edits.insert(script.edits.end(), edits.begin(), edits.end());
    }
    return script;
}

std::string render_edits(const EditScript& script)
{
    std::string out;
    for (const auto& e : script.edits) {
        out += e.path;
        out += '\n';
        out += kSearchMarker;
        out += '\n';
        render_section(out, e.search);
        out += kDividerMarker;
        out += '\n';
        render_section(out, e.replace);
        out += kReplaceMarker;
        out += '\n';
    }
    return out;
}

EditScript parse_edits(std::string_view input)
{
    enum class State { Outside, Search, Replace };

    EditScript script;
    const auto lines = text::split_lines_bare(input);
    State state = State::Outside;
    SearchReplaceEdit current;
    std::string* section = nullptr;

    for (std::size_t i = 0; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        const std::size_t line_no = i + 1;
        switch (state) {
        case State::Outside:
            if (line == kSearchMarker) {
                if (i == 0 || text::trim(lines[i - 1]).empty() || is_padded_marker(lines[i - 1]))
                    throw MalformedEdit(line_no, "file path line before " + std::string(kSearchMarker));
                current = {};
                current.path = std::string(text::trim(lines[i - 1]));
                section = &current.search;
                state = State::Search;
            } else if (text::trim(line) == kSearchMarker) {
                throw MalformedEdit(line_no, std::string(kSearchMarker));
            }
            break;
        case State::Search:
            if (line == kDividerMarker) {
                if (current.search.empty())
                    throw MalformedEdit(line_no, "non-empty search text");
                section = &current.replace;
                state = State::Replace;
            } else if (line == kSearchMarker || line == kReplaceMarker || is_padded_marker(line)) {
                throw MalformedEdit(line_no, std::string(kDividerMarker));
            } else if (line == kNoNewlineMarker) {
                if (!section->empty() && section->back() == '\n')
                    section->pop_back();
            } else {
                *section += line;
                *section += '\n';
            }
            break;
        case State::Replace:
            if (line == kReplaceMarker) {
                script.edits.push_back(std::move(current));
                current = {};
                state = State::Outside;
            } else if (line == kSearchMarker || line == kDividerMarker || is_padded_marker(line)) {
                throw MalformedEdit(line_no, std::string(kReplaceMarker));
            } else if (line == kNoNewlineMarker) {
                if (!section->empty() && section->back() == '\n')
                    section->pop_back();
            } else {
                *section += line;
                *section += '\n';
            }
            break;
        }
    }
    if (state == State::Search)
        throw MalformedEdit(lines.size() + 1, std::string(kDividerMarker));
    if (state == State::Replace)
        throw MalformedEdit(lines.size() + 1, std::string(kReplaceMarker));
    return script;
}

namespace {

std::size_t pick(const std::vector<std::size_t>& hits, const SearchReplaceEdit& e,
                 std::size_t index)
{
    if (e.occurrence) {
        if (*e.occurrence == 0 || *e.occurrence > hits.size())
            throw SearchNotFound(e.path, index);
        return *e.occurrence - 1;
    }
    if (hits.size() > 1)
        throw AmbiguousMatch(e.path, index, hits.size());
    return 0;
}

// Per-line match ignoring trailing whitespace. Returns the starting line of
// each match.
std::vector<std::size_t> loose_matches(const std::vector<std::string>& file_lines,
                                       const std::vector<std::string>& search_lines)
{
    std::vector<std::size_t> hits;
    if (search_lines.empty() || search_lines.size() > file_lines.size())
        return hits;
    for (std::size_t start = 0; start + search_lines.size() <= file_lines.size(); ++start) {
        bool ok = true;
        for (std::size_t j = 0; j < search_lines.size() && ok; ++j)
            ok = text::rtrim(file_lines[start + j]) == text::rtrim(search_lines[j]);
        if (ok)
            hits.push_back(start);
    }
    return hits;
}

}  // namespace

FileMap apply_edits(FileMap files, const EditScript& script)
{
    for (std::size_t index = 0; index < script.edits.size(); ++index) {
        const auto& e = script.edits[index];
        auto it = files.find(e.path);
        if (it == files.end())
            throw UnknownPath(e.path);
        std::string& content = it->second;

        auto hits = text::find_all(content, e.search);
        if (!hits.empty()) {
            auto pos = hits[pick(hits, e, index)];
            content.replace(pos, e.search.size(), e.replace);
            continue;
        }

        auto file_lines = text::split_lines(content);
        const auto search_lines = text::split_lines_bare(e.search);
        auto loose = loose_matches(file_lines, search_lines);
        if (loose.empty())
            throw SearchNotFound(e.path, index);
        const std::size_t start = loose[pick(loose, e, index)];
        const std::size_t end = start + search_lines.size();

        std::string replacement = e.replace;
        const bool search_has_nl = !e.search.empty() && e.search.back() == '\n';
        const bool last_has_nl = !file_lines[end - 1].empty() && file_lines[end - 1].back() == '\n';
        if (!search_has_nl && last_has_nl)
            replacement += '\n';

        std::string rebuilt;
        for (std::size_t i = 0; i < start; ++i)
            rebuilt += file_lines[i];
        rebuilt += replacement;
        for (std::size_t i = end; i < file_lines.size(); ++i)
            rebuilt += file_lines[i];
        content = std::move(rebuilt);
    }
    return files;
}

namespace {

void emit_line(std::string& out, char tag, const std::string& line)
{
    out += tag;
    out += line;
    if (line.empty() || line.back() != '\n') {
        out += '\n';
        out += kNoNewlineMarker;
        out += '\n';
    }
}

std::string range_spec(std::size_t start, std::size_t len)
{
    // A zero-length range names the line after which the change applies.
    std::string s = std::to_string(len == 0 ? start : start + 1);
    if (len != 1)
        s += "," + std::to_string(len);
    return s;
}

}  // namespace

std::string to_unified_diff(const FileMap& before, const FileMap& after, std::size_t context)
{
    std::set<std::string> paths;
    for (const auto& [p, _] : before)
        paths.insert(p);
    for (const auto& [p, _] : after)
        paths.insert(p);

    std::string out;
    for (const auto& path : paths) {
        auto b = before.find(path);
        auto a = after.find(path);
        const std::string empty;
        const std::string& old_text = b == before.end() ? empty : b->second;
        const std::string& new_text = a == after.end() ? empty : a->second;
        if (b != before.end() && a != after.end() && old_text == new_text)
            continue;

        const auto old_lines = text::split_lines(old_text);
        const auto new_lines = text::split_lines(new_text);
        const auto regions = diff_lines(old_lines, new_lines);
        if (regions.empty() && b != before.end() && a != after.end())
            continue;

        out += b == before.end() ? std::string("--- /dev/null\n") : "--- a/" + path + "\n";
        out += a == after.end() ? std::string("+++ /dev/null\n") : "+++ b/" + path + "\n";

        std::size_t i = 0;
        while (i < regions.size()) {
            std::size_t j = i;
            while (j + 1 < regions.size()
                   && regions[j + 1].old_begin - regions[j].old_end <= 2 * context)
                ++j;
            const auto& first = regions[i];
            const auto& last = regions[j];
            const std::size_t lead = std::min(context, first.old_begin);
            const std::size_t old_start = first.old_begin - lead;
            const std::size_t new_start = first.new_begin - lead;
            const std::size_t trail = std::min(context, old_lines.size() - last.old_end);
            const std::size_t old_end = last.old_end + trail;
            const std::size_t new_end = last.new_end + trail;

            out += "@@ -" + range_spec(old_start, old_end - old_start) + " +"
                   + range_spec(new_start, new_end - new_start) + " @@\n";
            std::size_t cursor = old_start;
            for (std::size_t r = i; r <= j; ++r) {
                for (; cursor < regions[r].old_begin; ++cursor)
                    emit_line(out, ' ', old_lines[cursor]);
                for (std::size_t k = regions[r].old_begin; k < regions[r].old_end; ++k)
                    emit_line(out, '-', old_lines[k]);
                for (std::size_t k = regions[r].new_begin; k < regions[r].new_end; ++k)
                    emit_line(out, '+', new_lines[k]);
                cursor = regions[r].old_end;
            }
            for (; cursor < old_end; ++cursor)
                emit_line(out, ' ', old_lines[cursor]);
            i = j + 1;
        }
    }
    return out;
}

}  // namespace resat::editfmt
