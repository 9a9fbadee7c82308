#pragma once

#include <resat/core/exclusion.hpp>
#include <resat/diffmap/unified_diff.hpp>
#include <resat/skeleton/skeleton.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace resat::diffmap {

using FunctionRef = std::pair<std::string, std::string>;  // (file, qualified name or <module-level>)
using LineRef = std::pair<std::string, int>;              // (file, 1-based pre-edit line)

/// Ground truth derived from a PR diff against the pre-edit files.
struct GoldLocalization {
    std::set<std::string> files;
    std::set<FunctionRef> functions;
    std::set<LineRef> lines;

    bool empty() const { return files.empty() && functions.empty() && lines.empty(); }
    bool operator==(const GoldLocalization&) const = default;
};

class MissingSkeleton : public std::runtime_error {
public:
    explicit MissingSkeleton(std::string path);
    std::string path;
};

/// Pre-edit line numbers touched by one file's hunks: every deleted line, and
/// for each block of pure additions the line just before the insertion point.
/// An insertion at the very top anchors to line 1 when the old file has
/// content (`old_line_count` > 0) and contributes nothing otherwise.
std::set<int> modified_lines(const FileDiff& diff, int old_line_count);

/// Gold files are the pre-existing analyzable files the patch touches (old
/// path for renames); added files have no pre-edit content and are left out.
std::set<std::string> gold_files(const std::vector<FileDiff>& diffs,
                                 const ExclusionRules& rules = ExclusionRules::defaults());

/// Full gold labels. `skeletons` must cover every gold file that has at least
/// one gold line, keyed by pre-edit path.
GoldLocalization gold_labels(const std::vector<FileDiff>& diffs,
                             const std::map<std::string, skeleton::FileSkeleton>& skeletons,
                             const ExclusionRules& rules = ExclusionRules::defaults());

}  // namespace resat::diffmap
