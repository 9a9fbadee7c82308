#include <resat/diffmap/gold.hpp>

namespace resat::diffmap {

MissingSkeleton::MissingSkeleton(std::string path_)
    : std::runtime_error("no skeleton for " + path_)
    , path(std::move(path_))
{
}

std::set<int> modified_lines(const FileDiff& diff, int old_line_count)
{
    std::set<int> out;
    for (const auto& h : diff.hunks) {
        // Number of the last old line consumed so far.
        int cursor = static_cast<int>(h.old_len == 0 ? h.old_start : h.old_start - 1);
        bool block_has_delete = false;
        bool in_block = false;
        int block_anchor = 0;

        auto close_block = [&] {
            if (in_block && !block_has_delete) {
                if (block_anchor > 0)
                    out.insert(block_anchor);
                else if (old_line_count > 0)
                    out.insert(1);
            }
            in_block = false;
            block_has_delete = false;
        };

        for (const auto& l : h.lines) {
            switch (l.tag) {
            case LineTag::Context:
                close_block();
                ++cursor;
                break;
            case LineTag::Delete:
                if (!in_block) {
                    in_block = true;
                    block_anchor = cursor;
                }
                block_has_delete = true;
                ++cursor;
                out.insert(cursor);
                break;
            case LineTag::Add:
                if (!in_block) {
                    in_block = true;
                    block_anchor = cursor;
                }
                break;
            }
        }
        close_block();
    }
    return out;
}

std::set<std::string> gold_files(const std::vector<FileDiff>& diffs, const ExclusionRules& rules)
{
    std::set<std::string> files;
    for (const auto& d : diffs) {
        if (d.status == FileStatus::Added)
            continue;
        if (rules.is_analyzable(d.old_path))
            files.insert(d.old_path);
    }
    return files;
}

GoldLocalization gold_labels(const std::vector<FileDiff>& diffs,
                             const std::map<std::string, skeleton::FileSkeleton>& skeletons,
                             const ExclusionRules& rules)
{
    GoldLocalization gold;
    gold.files = gold_files(diffs, rules);
    for (const auto& d : diffs) {
        if (d.status == FileStatus::Added || !gold.files.count(d.old_path))
            continue;
        auto it = skeletons.find(d.old_path);
        const int line_count = it == skeletons.end() ? -1 : it->second.line_count;
        // Without a skeleton the only safe anchor rule is "file has content".
        auto lines = modified_lines(d, line_count < 0 ? 1 : line_count);
        if (lines.empty())
            continue;
        if (it == skeletons.end())
            throw MissingSkeleton(d.old_path);
        for (int line : lines) {
            gold.lines.insert({d.old_path, line});
            gold.functions.insert({d.old_path, skeleton::enclosing_declaration(it->second, line)});
        }
    }
    return gold;
}

}  // namespace resat::diffmap
