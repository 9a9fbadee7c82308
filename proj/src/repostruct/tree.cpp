#include <resat/repostruct/tree.hpp>

#include <resat/core/text.hpp>

#include <algorithm>
#include <map>

namespace fs = std::filesystem;

namespace resat::repostruct {

PathNotFound::PathNotFound(const fs::path& p)
    : std::runtime_error("snapshot path not found: " + p.string())
{
}

namespace {

void sort_children(TreeNode& node)
{
    std::sort(node.children.begin(), node.children.end(), [](const TreeNode& a, const TreeNode& b) {
        if (a.kind != b.kind)
            return a.kind == NodeKind::Dir;
        return a.name < b.name;
    });
    for (auto& c : node.children)
        sort_children(c);
}

void insert_path(TreeNode& root, std::string_view path)
{
    TreeNode* node = &root;
    std::size_t start = 0;
    for (;;) {
        auto slash = path.find('/', start);
        auto part = std::string(path.substr(start, slash == std::string_view::npos ? path.npos : slash - start));
        const bool is_file = slash == std::string_view::npos;
        auto it = std::find_if(node->children.begin(), node->children.end(), [&](const TreeNode& c) {
            return c.name == part && c.kind == (is_file ? NodeKind::File : NodeKind::Dir);
        });
        if (it == node->children.end()) {
            node->children.push_back({part, is_file ? NodeKind::File : NodeKind::Dir, {}});
            it = std::prev(node->children.end());
        }
        if (is_file)
            return;
        node = &*it;
        start = slash + 1;
    }
}

void collect(const TreeNode& node, const std::string& prefix, std::vector<std::string>& out)
{
    for (const auto& c : node.children) {
        auto path = prefix.empty() ? c.name : prefix + "/" + c.name;
        if (c.kind == NodeKind::File)
            out.push_back(path);
        else
            collect(c, path, out);
    }
}

void render(const TreeNode& node, std::size_t depth, std::string& out)
{
    out.append(depth * 2, ' ');
    out += node.name;
    if (node.kind == NodeKind::Dir)
        out += '/';
    out += '\n';
    for (const auto& c : node.children)
        render(c, depth + 1, out);
}

}  // namespace

std::vector<std::string> RepoTree::file_paths() const
{
    std::vector<std::string> out;
    collect(root, "", out);
    return out;
}

RepoTree tree_from_paths(std::string root_name, const std::vector<std::string>& paths,
                         const ExclusionRules& rules)
{
    RepoTree tree;
    tree.root = {std::move(root_name), NodeKind::Dir, {}};
    for (const auto& raw : paths) {
        auto path = text::normalize_path(raw);
        if (path.empty() || !rules.is_analyzable(path))
            continue;
        insert_path(tree.root, path);
    }
    sort_children(tree.root);
    return tree;
}

RepoTree build_tree(const fs::path& snapshot_root, const ExclusionRules& rules, std::string root_name)
{
    std::error_code ec;
    if (!fs::is_directory(snapshot_root, ec))
        throw PathNotFound(snapshot_root);
    std::vector<std::string> paths;
    fs::recursive_directory_iterator it(snapshot_root, ec), end;
    if (ec)
        throw PathNotFound(snapshot_root);
    for (; it != end; it.increment(ec)) {
        if (ec)
            break;
        const auto& entry = *it;
        auto name = entry.path().filename().string();
        if (entry.is_directory() && rules.exclude_hidden && !name.empty() && name[0] == '.') {
            it.disable_recursion_pending();
            continue;
        }
        if (entry.is_regular_file())
            paths.push_back(fs::relative(entry.path(), snapshot_root).generic_string());
    }
    if (root_name.empty())
        root_name = fs::absolute(snapshot_root).lexically_normal().filename().string();
    if (root_name.empty())
        root_name = fs::absolute(snapshot_root).lexically_normal().parent_path().filename().string();
    return tree_from_paths(std::move(root_name), paths, rules);
}

std::string render_tree(const RepoTree& tree)
{
    std::string out;
    render(tree.root, 0, out);
    return out;
}

RepoTree parse_tree(std::string_view rendering)
{
    auto lines = text::split_lines_bare(rendering);
    if (lines.empty())
        throw std::invalid_argument("empty tree rendering");
    RepoTree tree;
    auto root = std::string_view(lines[0]);
    if (!text::ends_with(root, "/"))
        throw std::invalid_argument("tree rendering must start with a directory");
    tree.root = {std::string(root.substr(0, root.size() - 1)), NodeKind::Dir, {}};
    std::vector<TreeNode*> stack{&tree.root};
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        std::size_t spaces = 0;
        while (spaces < line.size() && line[spaces] == ' ')
            ++spaces;
        if (spaces % 2 != 0 || spaces == 0)
            throw std::invalid_argument("bad indentation on tree line " + std::to_string(i + 1));
        std::size_t depth = spaces / 2;
        if (depth > stack.size())
            throw std::invalid_argument("tree line " + std::to_string(i + 1) + " skips a level");
        stack.resize(depth);
        auto name = line.substr(spaces);
        TreeNode node;
        if (text::ends_with(name, "/")) {
            node = {std::string(name.substr(0, name.size() - 1)), NodeKind::Dir, {}};
        } else {
            node = {std::string(name), NodeKind::File, {}};
        }
        if (stack.back()->kind != NodeKind::Dir)
            throw std::invalid_argument("file with children on tree line " + std::to_string(i + 1));
        stack.back()->children.push_back(std::move(node));
        stack.push_back(&stack.back()->children.back());
    }
    return tree;
}

}  // namespace resat::repostruct
