#include <resat/samplegen/task.hpp>

#include <resat/ingest/client.hpp>

#include <spdlog/spdlog.h>

namespace fs = std::filesystem;

namespace resat::samplegen {

TaskError::TaskError(const std::string& task_id, const std::string& reason)
    : std::runtime_error(task_id + ": " + reason)
{
}

fs::path snapshot_dir(const fs::path& repo_dir, const std::string& sha)
{
    return repo_dir / "snapshots" / sha;
}

PreparedTask prepare_task(const ingest::LinkedTask& task, const fs::path& repo_dir, const ExclusionRules& rules)
{
    const auto id = task.task_id();
    PreparedTask p;
    p.task = task;
    p.snapshot_root = snapshot_dir(repo_dir, task.pr.parent_sha);
    if (task.pr.parent_sha.empty() || !fs::is_directory(p.snapshot_root))
        throw TaskError(id, "missing pre-merge snapshot " + p.snapshot_root.string());

    try {
        p.diffs = diffmap::parse_unified_diff(task.pr.diff_text);
    } catch (const diffmap::MalformedDiff& e) {
        throw TaskError(id, e.what());
    }

    p.tree = repostruct::build_tree(p.snapshot_root, rules, task.repo.name);
    p.tree_rendering = repostruct::render_tree(p.tree);
    for (const auto& path : p.tree.file_paths())
        p.pre_files[path] = ingest::read_file(p.snapshot_root / path);

    const auto files = diffmap::gold_files(p.diffs, rules);
    for (const auto& path : files) {
        auto it = p.pre_files.find(path);
        if (it == p.pre_files.end())
            throw TaskError(id, "diff modifies " + path + " which is not in the snapshot");
        try {
            p.skeletons.emplace(path, skeleton::parse_file(path, it->second));
        } catch (const skeleton::SyntaxError& e) {
            spdlog::warn("{}: {}", id, e.what());
            p.syntax_errors.insert(path);
        }
    }

    if (p.syntax_errors.empty()) {
        p.gold = diffmap::gold_labels(p.diffs, p.skeletons, rules);
    } else {
        p.gold.files = files;
        p.gold_complete = false;
    }

    // Post-merge contents of the gold files; renames keep the pre-edit key.
    editfmt::FileMap touched;
    for (const auto& d : p.diffs) {
        if (d.status == diffmap::FileStatus::Modified || d.status == diffmap::FileStatus::Renamed) {
            if (!files.count(d.old_path))
                continue;
            try {
                p.before[d.old_path] = p.pre_files.at(d.old_path);
                p.after[d.old_path] = diffmap::apply_file_diff(p.pre_files.at(d.old_path), d);
            } catch (const diffmap::PatchMismatch& e) {
                throw TaskError(id, e.what());
            }
        }
    }
    try {
        p.edit_script = editfmt::serialize_edits(p.before, p.after);
    } catch (const std::invalid_argument& e) {
        // An empty pre-edit file has nothing a search block could anchor on.
        spdlog::warn("{}: no edit script: {}", id, e.what());
    }
    return p;
}

}  // namespace resat::samplegen
