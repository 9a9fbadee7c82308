#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resat::editfmt {

using FileMap = std::map<std::string, std::string>;

/// One textual replacement. `search` is matched against the current file text;
/// `occurrence` (1-based) picks among several matches when present.
struct SearchReplaceEdit {
    std::string path;
    std::string search;
    std::string replace;
    std::optional<std::size_t> occurrence;

    bool operator==(const SearchReplaceEdit&) const = default;
};

struct EditScript {
    std::vector<SearchReplaceEdit> edits;

    bool empty() const { return edits.empty(); }
    bool operator==(const EditScript&) const = default;
};

class EditError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedEdit : public EditError {
public:
    MalformedEdit(std::size_t line_no, std::string expected);
    std::size_t line_no;
    std::string expected;
};

class SearchNotFound : public EditError {
public:
    SearchNotFound(std::string path, std::size_t edit_index);
    std::string path;
    std::size_t edit_index;
};

class AmbiguousMatch : public EditError {
public:
    AmbiguousMatch(std::string path, std::size_t edit_index, std::size_t match_count);
    std::string path;
    std::size_t edit_index;
    std::size_t match_count;
};

class UnknownPath : public EditError {
public:
    explicit UnknownPath(std::string path);
    std::string path;
};

inline constexpr std::string_view kSearchMarker = "<<<<<<< SEARCH";
inline constexpr std::string_view kDividerMarker = "=======";
inline constexpr std::string_view kReplaceMarker = ">>>>>>> REPLACE";
inline constexpr std::string_view kNoNewlineMarker = "\\ No newline at end of file";

/// Builds the edit script turning `before` into `after`. Paths present in only
/// one map are ignored (file creation and deletion are not expressible).
///
/// Change regions come from an LCS line diff; regions separated by at most two
/// unchanged lines are merged, then each search block grows by one unchanged
/// line on both sides until its text occurs exactly once in the file. Edits on
/// one path are ordered by position and are also unique against the partially
/// edited text seen during sequential application.
EditScript serialize_edits(const FileMap& before, const FileMap& after);

/// Writes the block grammar:
///
///     path/to/file.py
///     <<<<<<< SEARCH
///     ...search lines...
///     =======
///     ...replace lines...
///     >>>>>>> REPLACE
///
/// A section whose text does not end in '\n' is followed by the line
/// `\ No newline at end of file`.
std::string render_edits(const EditScript& script);

/// Inverse of render_edits. Text outside blocks is ignored. Marker lines must
/// match exactly; a marker padded with whitespace is an error.
EditScript parse_edits(std::string_view text);

/// Applies edits in order against the progressively edited files. Exact
/// substring match first, then a per-line match that ignores trailing
/// whitespace.
FileMap apply_edits(FileMap files, const EditScript& script);

/// Standard unified diff with a/ and b/ prefixes. Paths missing from one side
/// are diffed against /dev/null.
std::string to_unified_diff(const FileMap& before, const FileMap& after, std::size_t context = 3);

}  // namespace resat::editfmt
