#include <resat/diffmap/unified_diff.hpp>

#include <resat/core/text.hpp>

#include <charconv>
#include <optional>
#include <spdlog/spdlog.h>

namespace resat::diffmap {

std::string_view to_string(FileStatus status)
{
    switch (status) {
    case FileStatus::Modified:
        return "modified";
    case FileStatus::Added:
        return "added";
    case FileStatus::Deleted:
        return "deleted";
    case FileStatus::Renamed:
        return "renamed";
    }
    return "modified";
}

MalformedDiff::MalformedDiff(std::size_t line_no_, std::string reason_)
    : std::runtime_error("malformed diff at line " + std::to_string(line_no_) + ": " + reason_)
    , line_no(line_no_)
    , reason(std::move(reason_))
{
}

PatchMismatch::PatchMismatch(std::string path_, std::size_t old_line_, std::string reason_)
    : std::runtime_error("patch does not apply to " + path_ + " at line "
                         + std::to_string(old_line_) + ": " + reason_)
    , path(std::move(path_))
    , old_line(old_line_)
{
}

namespace {

constexpr std::string_view kDevNull = "/dev/null";

// "a/foo.py\t2020-01-01 ..." -> "foo.py"
std::string header_path(std::string_view raw)
{
    auto tab = raw.find('\t');
    if (tab != std::string_view::npos)
        raw = raw.substr(0, tab);
    raw = text::rtrim(raw);
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        raw = raw.substr(1, raw.size() - 2);
    if (raw == kDevNull)
        return std::string(kDevNull);
    if (text::starts_with(raw, "a/") || text::starts_with(raw, "b/"))
        raw.remove_prefix(2);
    return std::string(raw);
}

bool parse_number(std::string_view& s, std::size_t& out)
{
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr == s.data())
        return false;
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return true;
}

// "-a[,b]" or "+c[,d]"
bool parse_range(std::string_view& s, char sign, std::size_t& start, std::size_t& len)
{
    if (s.empty() || s.front() != sign)
        return false;
    s.remove_prefix(1);
    if (!parse_number(s, start))
        return false;
    len = 1;
    if (!s.empty() && s.front() == ',') {
        s.remove_prefix(1);
        if (!parse_number(s, len))
            return false;
    }
    return true;
}

std::optional<Hunk> parse_hunk_header(std::string_view line)
{
    if (!text::starts_with(line, "@@ "))
        return std::nullopt;
    auto s = line.substr(3);
    Hunk h;
    if (!parse_range(s, '-', h.old_start, h.old_len))
        return std::nullopt;
    if (s.empty() || s.front() != ' ')
        return std::nullopt;
    s.remove_prefix(1);
    if (!parse_range(s, '+', h.new_start, h.new_len))
        return std::nullopt;
    if (!text::starts_with(s, " @@"))
        return std::nullopt;
    return h;
}

struct Entry {
    FileDiff diff;
    bool binary = false;
    bool has_headers = false;
    bool new_file = false;
    bool deleted_file = false;
    bool renamed = false;
    std::size_t line_no = 0;
};

void finalize(Entry& e, std::vector<FileDiff>& out)
{
    if (e.binary) {
        spdlog::info("skipping binary diff entry for {}", e.diff.new_path.empty() ? e.diff.old_path : e.diff.new_path);
        return;
    }
    auto& d = e.diff;
    if (d.old_path == kDevNull)
        d.old_path.clear();
    if (d.new_path == kDevNull)
        d.new_path.clear();

    if (e.new_file || (e.has_headers && d.old_path.empty()))
        d.status = FileStatus::Added;
    else if (e.deleted_file || (e.has_headers && d.new_path.empty()))
        d.status = FileStatus::Deleted;
    else if (e.renamed || (!d.old_path.empty() && !d.new_path.empty() && d.old_path != d.new_path))
        d.status = FileStatus::Renamed;
    else
        d.status = FileStatus::Modified;

    if (d.status == FileStatus::Added)
        d.old_path.clear();
    if (d.status == FileStatus::Deleted)
        d.new_path.clear();

    if (d.hunks.empty() && d.status == FileStatus::Modified) {
        spdlog::info("skipping diff entry without hunks for {}", d.old_path);
        return;
    }
    out.push_back(std::move(d));
}

}  // namespace

std::vector<FileDiff> parse_unified_diff(std::string_view input)
{
    const auto lines = text::split_lines(input);
    std::vector<FileDiff> out;
    std::optional<Entry> entry;

    auto bare = [](const std::string& l) {
        std::string_view v = l;
        if (!v.empty() && v.back() == '\n')
            v.remove_suffix(1);
        if (!v.empty() && v.back() == '\r')
            v.remove_suffix(1);
        return v;
    };

    std::size_t i = 0;
    while (i < lines.size()) {
        const std::size_t line_no = i + 1;
        std::string_view line = bare(lines[i]);

        if (text::starts_with(line, "diff --git ")) {
            if (entry)
                finalize(*entry, out);
            entry = Entry{};
            entry->line_no = line_no;
            // Fallback paths from "diff --git a/x b/y"; ---/+++ or rename lines override.
            auto rest = line.substr(11);
            auto split = rest.find(" b/");
            if (split != std::string_view::npos) {
                entry->diff.old_path = header_path(rest.substr(0, split));
                entry->diff.new_path = header_path(rest.substr(split + 1));
            }
            ++i;
            continue;
        }
        if (text::starts_with(line, "--- ") && i + 1 < lines.size()
            && text::starts_with(bare(lines[i + 1]), "+++ ")) {
            if (entry && (entry->has_headers || !entry->diff.hunks.empty())) {
                finalize(*entry, out);
                entry.reset();
            }
            if (!entry) {
                entry = Entry{};
                entry->line_no = line_no;
            }
            entry->has_headers = true;
            entry->diff.old_path = header_path(line.substr(4));
            entry->diff.new_path = header_path(bare(lines[i + 1]).substr(4));
            i += 2;
            continue;
        }
        if (!entry) {
            if (text::starts_with(line, "@@ "))
                throw MalformedDiff(line_no, "hunk before file header");
            ++i;
            continue;
        }
        if (text::starts_with(line, "new file mode")) {
            entry->new_file = true;
        } else if (text::starts_with(line, "deleted file mode")) {
            entry->deleted_file = true;
        } else if (text::starts_with(line, "rename from ")) {
            entry->renamed = true;
            entry->diff.old_path = std::string(line.substr(12));
        } else if (text::starts_with(line, "rename to ")) {
            entry->renamed = true;
            entry->diff.new_path = std::string(line.substr(10));
        } else if (text::starts_with(line, "Binary files ") || line == "GIT binary patch") {
            entry->binary = true;
        } else if (text::starts_with(line, "@@")) {
            auto header = parse_hunk_header(line);
            if (!header)
                throw MalformedDiff(line_no, "invalid hunk header");
            if (!entry->has_headers)
                throw MalformedDiff(line_no, "hunk before ---/+++ headers");
            Hunk h = *header;
            std::size_t old_seen = 0, new_seen = 0;
            ++i;
            while (old_seen < h.old_len || new_seen < h.new_len) {
                if (i >= lines.size())
                    throw MalformedDiff(i + 1, "hunk truncated: expected "
                                                    + std::to_string(h.old_len) + " old and "
                                                    + std::to_string(h.new_len) + " new lines");
                const std::string& raw = lines[i];
                if (text::starts_with(raw, "\\")) {
                    if (!h.lines.empty() && !h.lines.back().text.empty()
                        && h.lines.back().text.back() == '\n')
                        h.lines.back().text.pop_back();
                    ++i;
                    continue;
                }
                char tag = raw.empty() ? ' ' : raw[0];
                std::string body = raw.empty() ? std::string() : raw.substr(1);
                if (raw == "\n") {
                    tag = ' ';
                    body = "\n";
                }
                if (tag == ' ') {
                    h.lines.push_back({LineTag::Context, body});
                    ++old_seen;
                    ++new_seen;
                } else if (tag == '-') {
                    h.lines.push_back({LineTag::Delete, body});
                    ++old_seen;
                } else if (tag == '+') {
                    h.lines.push_back({LineTag::Add, body});
                    ++new_seen;
                } else {
                    throw MalformedDiff(i + 1, "hunk truncated: unexpected line inside hunk");
                }
                if (old_seen > h.old_len || new_seen > h.new_len)
                    throw MalformedDiff(i + 1, "hunk line counts exceed header");
                ++i;
            }
            if (i < lines.size() && text::starts_with(lines[i], "\\")) {
                if (!h.lines.empty() && !h.lines.back().text.empty()
                    && h.lines.back().text.back() == '\n')
                    h.lines.back().text.pop_back();
                ++i;
            }
            entry->diff.hunks.push_back(std::move(h));
            continue;
        }
        ++i;
    }
    if (entry)
        finalize(*entry, out);
    return out;
}

std::string apply_file_diff(std::string_view old_text, const FileDiff& diff)
{
    const auto old_lines = text::split_lines(old_text);
    const std::string& path = diff.old_path.empty() ? diff.new_path : diff.old_path;
    std::string out;
    std::size_t cursor = 0;  // old lines consumed
    for (const auto& h : diff.hunks) {
        std::size_t begin = h.old_len == 0 ? h.old_start : h.old_start - 1;
        if (h.old_len != 0 && h.old_start == 0)
            throw PatchMismatch(path, 0, "hunk starts at line 0");
        if (begin < cursor || begin > old_lines.size())
            throw PatchMismatch(path, h.old_start, "hunk out of order or beyond end of file");
        for (; cursor < begin; ++cursor)
            out += old_lines[cursor];
        for (const auto& l : h.lines) {
            if (l.tag == LineTag::Add) {
                out += l.text;
                continue;
            }
            if (cursor >= old_lines.size() || old_lines[cursor] != l.text)
                throw PatchMismatch(path, cursor + 1,
                                    l.tag == LineTag::Context ? "context mismatch" : "deleted line mismatch");
            if (l.tag == LineTag::Context)
                out += l.text;
            ++cursor;
        }
    }
    for (; cursor < old_lines.size(); ++cursor)
        out += old_lines[cursor];
    return out;
}

FileMap apply_diffs(FileMap files, const std::vector<FileDiff>& diffs)
{
    for (const auto& d : diffs) {
        switch (d.status) {
        case FileStatus::Added:
            if (files.count(d.new_path))
                throw PatchMismatch(d.new_path, 0, "added file already exists");
            files[d.new_path] = apply_file_diff("", d);
            break;
        case FileStatus::Deleted: {
            auto it = files.find(d.old_path);
            if (it == files.end())
                throw PatchMismatch(d.old_path, 0, "deleted file does not exist");
            if (!apply_file_diff(it->second, d).empty())
                throw PatchMismatch(d.old_path, 0, "deletion leaves content behind");
            files.erase(it);
            break;
        }
        case FileStatus::Modified:
        case FileStatus::Renamed: {
            auto it = files.find(d.old_path);
            if (it == files.end())
                throw PatchMismatch(d.old_path, 0, "file does not exist");
            auto updated = apply_file_diff(it->second, d);
            files.erase(it);
            files[d.new_path] = std::move(updated);
            break;
        }
        }
    }
    return files;
}

}  // namespace resat::diffmap
