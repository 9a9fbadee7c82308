#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resat::diffmap {

enum class LineTag { Context, Delete, Add };

struct HunkLine {
    LineTag tag = LineTag::Context;
    /// Line content including its '\n', unless the diff marked it with
    /// "\ No newline at end of file".
    std::string text;

    bool operator==(const HunkLine&) const = default;
};

struct Hunk {
    std::size_t old_start = 0;
    std::size_t old_len = 0;
    std::size_t new_start = 0;
    std::size_t new_len = 0;
    std::vector<HunkLine> lines;

    bool operator==(const Hunk&) const = default;
};

enum class FileStatus { Modified, Added, Deleted, Renamed };

std::string_view to_string(FileStatus status);

struct FileDiff {
    /// Empty for added files.
    std::string old_path;
    /// Empty for deleted files.
    std::string new_path;
    FileStatus status = FileStatus::Modified;
    std::vector<Hunk> hunks;

    bool operator==(const FileDiff&) const = default;
};

class MalformedDiff : public std::runtime_error {
public:
    MalformedDiff(std::size_t line_no, std::string reason);
    std::size_t line_no;
    std::string reason;
};

class PatchMismatch : public std::runtime_error {
public:
    PatchMismatch(std::string path, std::size_t old_line, std::string reason);
    std::string path;
    std::size_t old_line;
};

/// Parses `git diff` and plain `diff -u` output. Binary entries and entries
/// that only change file modes are skipped.
std::vector<FileDiff> parse_unified_diff(std::string_view text);

/// Applies one file's hunks to its old content, verifying every context and
/// deleted line.
std::string apply_file_diff(std::string_view old_text, const FileDiff& diff);

using FileMap = std::map<std::string, std::string>;

/// Applies a whole patch to a set of files, honoring additions, deletions and
/// renames.
FileMap apply_diffs(FileMap files, const std::vector<FileDiff>& diffs);

}  // namespace resat::diffmap
