#pragma once

#include <resat/core/exclusion.hpp>
#include <resat/diffmap/gold.hpp>
#include <resat/diffmap/unified_diff.hpp>
#include <resat/editfmt/search_replace.hpp>
#include <resat/ingest/types.hpp>
#include <resat/repostruct/tree.hpp>
#include <resat/skeleton/skeleton.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace resat::samplegen {

class TaskError : public std::runtime_error {
public:
    TaskError(const std::string& task_id, const std::string& reason);
};

/// Everything derived from one LinkedTask and its pre-merge snapshot.
struct PreparedTask {
    ingest::LinkedTask task;
    std::filesystem::path snapshot_root;
    std::vector<diffmap::FileDiff> diffs;

    repostruct::RepoTree tree;
    std::string tree_rendering;

    /// Pre-edit contents of every file in the tree.
    editfmt::FileMap pre_files;
    /// Skeletons of gold files that parsed cleanly.
    std::map<std::string, skeleton::FileSkeleton> skeletons;
    /// Gold files the skeleton parser rejected.
    std::set<std::string> syntax_errors;

    diffmap::GoldLocalization gold;
    /// False when function and line labels could not be derived (a gold file
    /// failed to parse); `gold.files` is still valid.
    bool gold_complete = true;

    /// Pre/post contents of gold files that exist on both sides of the merge,
    /// keyed by pre-edit path.
    editfmt::FileMap before;
    editfmt::FileMap after;
    /// serialize_edits(before, after)
    editfmt::EditScript edit_script;
};

/// Snapshot directory of a commit inside a cached repository.
std::filesystem::path snapshot_dir(const std::filesystem::path& repo_dir, const std::string& sha);

/// Parses the diff, builds the tree from the snapshot, skeletonizes gold
/// files and derives gold labels and the gold edit script. Throws TaskError
/// when the snapshot is missing or the diff does not parse or apply.
PreparedTask prepare_task(const ingest::LinkedTask& task, const std::filesystem::path& repo_dir,
                          const ExclusionRules& rules = ExclusionRules::defaults());

}  // namespace resat::samplegen
