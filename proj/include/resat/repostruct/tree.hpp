#pragma once

#include <resat/core/exclusion.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace resat::repostruct {

enum class NodeKind { Dir, File };

struct TreeNode {
    std::string name;
    NodeKind kind = NodeKind::Dir;
    /// Directories first, then files; each group sorted by name (bytewise).
    std::vector<TreeNode> children;

    bool operator==(const TreeNode&) const = default;
};

struct RepoTree {
    TreeNode root;
    bool operator==(const RepoTree&) const = default;

    /// Repository-relative paths of every file, in rendering order.
    std::vector<std::string> file_paths() const;
};

class PathNotFound : public std::runtime_error {
public:
    explicit PathNotFound(const std::filesystem::path& p);
};

/// Walks a snapshot directory, keeping only analyzable files. Directories that
/// end up empty and hidden directories are pruned. `root_name` defaults to the
/// directory's own name.
RepoTree build_tree(const std::filesystem::path& snapshot_root,
                    const ExclusionRules& rules = ExclusionRules::defaults(),
                    std::string root_name = {});

/// Same as build_tree but from a list of repository-relative paths.
RepoTree tree_from_paths(std::string root_name, const std::vector<std::string>& paths,
                         const ExclusionRules& rules = ExclusionRules::defaults());

/// Two spaces of indent per depth, directories suffixed with '/', root on the
/// first line.
std::string render_tree(const RepoTree& tree);

/// Inverse of render_tree.
RepoTree parse_tree(std::string_view rendering);

}  // namespace resat::repostruct
