#include <resat/samplegen/samples.hpp>

#include <resat/core/text.hpp>
#include <resat/samplegen/templates.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <random>
#include <regex>
#include <stdexcept>

namespace fs = std::filesystem;

namespace resat::samplegen {

namespace {

bool is_word_byte(unsigned char c)
{
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

int line_count_of(const std::string& content)
{
    return static_cast<int>(text::split_lines(content).size());
}

SampleMeta meta_for(const PreparedTask& task)
{
    SampleMeta m;
    m.repo = task.task.repo.full_name();
    m.pr_number = task.task.pr.number;
    m.issue_numbers = task.task.issue_numbers();
    m.files.assign(task.gold.files.begin(), task.gold.files.end());
    return m;
}

SampleResult finish(SampleKind kind, const PreparedTask& task, std::string input, std::string output,
                    const SampleOptions& options)
{
    TrainingSample s;
    s.kind = kind;
    s.input_text = std::move(input);
    s.output_text = std::move(output);
    s.meta = meta_for(task);
    s.meta.token_count = options.counter(s.input_text + s.output_text);
    return {std::move(s), {}};
}

std::vector<LineRange> merge_ranges(std::vector<LineRange> ranges)
{
    std::sort(ranges.begin(), ranges.end(),
              [](const LineRange& a, const LineRange& b) { return std::tie(a.start, a.end) < std::tie(b.start, b.end); });
    std::vector<LineRange> out;
    for (const auto& r : ranges) {
        if (r.end < r.start)
            continue;
        if (!out.empty() && r.start <= out.back().end + 1)
            out.back().end = std::max(out.back().end, r.end);
        else
            out.push_back(r);
    }
    return out;
}

bool overlaps(const std::vector<LineRange>& ranges, int start, int end)
{
    return std::any_of(ranges.begin(), ranges.end(),
                       [&](const LineRange& r) { return start <= r.end && r.start <= end; });
}

/// Line span of each search block in the pre-edit file it targets.
RegionMap search_regions(const PreparedTask& task)
{
    RegionMap out;
    for (const auto& e : task.edit_script.edits) {
        auto it = task.before.find(e.path);
        if (it == task.before.end() || e.search.empty())
            continue;
        auto pos = it->second.find(e.search);
        if (pos == std::string::npos)
            continue;
        int start = 1 + static_cast<int>(std::count(it->second.begin(), it->second.begin() + pos, '\n'));
        int newlines = static_cast<int>(std::count(e.search.begin(), e.search.end(), '\n'));
        int end = start + newlines - (e.search.back() == '\n' ? 1 : 0);
        out[e.path].push_back({start, end});
    }
    return out;
}

}  // namespace

std::string_view to_string(SampleKind kind)
{
    switch (kind) {
    case SampleKind::FileLoc:
        return "FileLoc";
    case SampleKind::FuncLoc:
        return "FuncLoc";
    case SampleKind::LineLoc:
        return "LineLoc";
    case SampleKind::CodeEdit:
        return "CodeEdit";
    }
    return "?";
}

SampleKind kind_from_string(std::string_view name)
{
    for (auto k : kAllKinds)
        if (to_string(k) == name)
            return k;
    throw std::invalid_argument("unknown sample kind: " + std::string(name));
}

std::size_t count_tokens(std::string_view text)
{
    std::size_t n = 0;
    bool in_word = false;
    for (unsigned char c : text) {
        if (is_word_byte(c)) {
            if (!in_word)
                ++n;
            in_word = true;
        } else {
            in_word = false;
            if (!std::isspace(c))
                ++n;
        }
    }
    return n;
}

// -- answer formats -----------------------------------------------------------

std::string format_file_answer(const std::set<std::string>& files)
{
    std::string out;
    for (const auto& f : files)
        out += f + "\n";
    return out;
}

std::string format_function_answer(const std::set<diffmap::FunctionRef>& functions)
{
    std::string out;
    for (const auto& [path, name] : functions)
        out += path + ": " + name + "\n";
    return out;
}

std::string format_line_answer(const std::set<diffmap::FunctionRef>& functions,
                               const std::set<diffmap::LineRef>& lines,
                               const std::map<std::string, skeleton::FileSkeleton>& skeletons)
{
    std::map<diffmap::FunctionRef, std::vector<int>> grouped;
    for (const auto& f : functions)
        grouped[f];
    for (const auto& [path, line] : lines) {
        auto sk = skeletons.find(path);
        if (sk == skeletons.end())
            continue;
        grouped[{path, skeleton::enclosing_declaration(sk->second, line)}].push_back(line);
    }
    std::string out;
    for (const auto& [ref, ls] : grouped) {
        out += ref.first + ": " + ref.second + ": lines [";
        for (std::size_t i = 0; i < ls.size(); ++i)
            out += (i ? ", " : "") + std::to_string(ls[i]);
        out += "]\n";
    }
    return out;
}

std::vector<std::string> parse_file_answer(std::string_view text)
{
    std::vector<std::string> out;
    for (auto& raw : text::split_lines_bare(text)) {
        std::string line(text::trim(raw));
        if (line.empty() || text::starts_with(line, "```"))
            continue;
        if (std::find(out.begin(), out.end(), line) == out.end())
            out.push_back(line);
    }
    return out;
}

std::set<diffmap::FunctionRef> parse_function_answer(std::string_view text)
{
    std::set<diffmap::FunctionRef> out;
    for (auto& raw : text::split_lines_bare(text)) {
        std::string line(text::trim(raw));
        auto sep = line.find(": ");
        if (sep == std::string::npos)
            continue;
        std::string_view view(line);
        std::string path(text::trim(view.substr(0, sep)));
        std::string name(text::trim(view.substr(sep + 2)));
        if (!path.empty() && !name.empty())
            out.emplace(path, name);
    }
    return out;
}

std::pair<std::set<diffmap::FunctionRef>, std::set<diffmap::LineRef>> parse_line_answer(std::string_view text)
{
    static const std::regex re(R"(^([^:]+): (?:(.+): )?lines \[([^\]]*)\]$)");
    std::set<diffmap::FunctionRef> functions;
    std::set<diffmap::LineRef> lines;
    for (auto& raw : text::split_lines_bare(text)) {
        std::string line(text::trim(raw));
        std::smatch m;
        if (!std::regex_match(line, m, re))
            continue;
        std::string path(text::trim(m[1].str()));
        if (m[2].matched)
            functions.emplace(path, std::string(text::trim(m[2].str())));
        std::string nums = m[3].str();
        std::replace(nums.begin(), nums.end(), ',', ' ');
        std::size_t i = 0;
        while (i < nums.size()) {
            while (i < nums.size() && nums[i] == ' ')
                ++i;
            std::size_t j = i;
            while (j < nums.size() && std::isdigit(static_cast<unsigned char>(nums[j])))
                ++j;
            if (j > i)
                lines.emplace(path, std::stoi(nums.substr(i, j - i)));
            else if (i < nums.size())
                ++j;  // skip stray character
            i = j;
        }
    }
    return {functions, lines};
}

// -- numbered snippets --------------------------------------------------------

std::string render_numbered(const editfmt::FileMap& files, const RegionMap& regions)
{
    std::string out;
    for (const auto& [path, ranges] : regions) {
        auto it = files.find(path);
        if (it == files.end())
            continue;
        auto lines = text::split_lines(it->second);
        int n = static_cast<int>(lines.size());
        std::vector<LineRange> clipped;
        for (auto r : ranges)
            clipped.push_back({std::max(r.start, 1), std::min(r.end, n)});
        auto merged = merge_ranges(std::move(clipped));
        if (merged.empty())
            continue;
        out += "### " + path + "\n";
        for (std::size_t i = 0; i < merged.size(); ++i) {
            if (i > 0)
                out += "...\n";
            for (int l = merged[i].start; l <= merged[i].end; ++l) {
                const auto& s = lines[l - 1];
                out += std::to_string(l) + "|" + s;
                if (s.empty() || s.back() != '\n')
                    out += '\n';
            }
        }
    }
    return out;
}

RegionMap gold_function_regions(const PreparedTask& task, int module_context)
{
    RegionMap out;
    for (const auto& [path, name] : task.gold.functions) {
        auto sk = task.skeletons.find(path);
        if (sk == task.skeletons.end())
            continue;
        if (name == skeleton::kModuleLevel) {
            for (auto it = task.gold.lines.lower_bound({path, 0}); it != task.gold.lines.end() && it->first == path;
                 ++it) {
                if (skeleton::enclosing_declaration(sk->second, it->second) == skeleton::kModuleLevel)
                    out[path].push_back({it->second - module_context, it->second + module_context});
            }
        } else if (const auto* d = skeleton::find_by_name(sk->second, name)) {
            out[path].push_back({d->start_line, d->end_line});
        }
    }
    for (auto& [path, ranges] : out) {
        int n = line_count_of(task.pre_files.at(path));
        for (auto& r : ranges) {
            r.start = std::max(r.start, 1);
            r.end = std::min(r.end, n);
        }
        ranges = merge_ranges(std::move(ranges));
    }
    return out;
}

std::vector<std::pair<std::string, skeleton::Declaration>> select_distractors(const PreparedTask& task,
                                                                                std::size_t count,
                                                                                std::uint64_t seed)
{
    const auto gold_regions = gold_function_regions(task);
    std::vector<std::pair<std::string, skeleton::Declaration>> pool;
    for (const auto& path : task.gold.files) {
        auto sk = task.skeletons.find(path);
        if (sk == task.skeletons.end())
            continue;
        auto g = gold_regions.find(path);
        for (const auto& d : sk->second.declarations) {
            if (d.kind == skeleton::DeclKind::Class)
                continue;
            if (g != gold_regions.end() && overlaps(g->second, d.start_line, d.end_line))
                continue;
            pool.emplace_back(path, d);
        }
    }

    auto key = task.task.repo.full_name() + "#" + std::to_string(task.task.pr.number);
    std::mt19937_64 rng(text::fnv1a64(key, text::fnv1a64(std::to_string(seed))));
    for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[rng() % i]);
    pool.resize(std::min(count, pool.size()));
    std::sort(pool.begin(), pool.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first, a.second.start_line) < std::tie(b.first, b.second.start_line);
    });
    return pool;
}

// -- sample builders ----------------------------------------------------------

SampleResult make_file_loc_sample(const PreparedTask& task, const SampleOptions& options)
{
    std::set<std::string> files;
    for (const auto& f : task.gold.files)
        if (task.pre_files.count(f))
            files.insert(f);
    if (files.empty())
        return SampleResult::skip("no_gold_files");
    return finish(SampleKind::FileLoc, task, file_loc_prompt(task.task.problem_statement, task.tree_rendering),
                  format_file_answer(files), options);
}

SampleResult make_func_loc_sample(const PreparedTask& task, const SampleOptions& options)
{
    if (task.gold.files.empty())
        return SampleResult::skip("no_gold_files");
    if (!task.gold_complete)
        return SampleResult::skip("syntax_error");
    if (task.gold.functions.empty())
        return SampleResult::skip("no_gold_functions");
    std::string skeletons;
    for (const auto& path : task.gold.files) {
        auto sk = task.skeletons.find(path);
        if (sk != task.skeletons.end())
            skeletons += skeleton::render_skeleton(sk->second);
    }
    return finish(SampleKind::FuncLoc, task, func_loc_prompt(task.task.problem_statement, skeletons),
                  format_function_answer(task.gold.functions), options);
}

SampleResult make_line_loc_sample(const PreparedTask& task, const SampleOptions& options)
{
    if (task.gold.files.empty())
        return SampleResult::skip("no_gold_files");
    if (!task.gold_complete)
        return SampleResult::skip("syntax_error");
    if (task.gold.lines.empty())
        return SampleResult::skip("no_gold_lines");
    auto regions = gold_function_regions(task);
    for (const auto& [path, d] : select_distractors(task, options.distractor_count, options.seed))
        regions[path].push_back({d.start_line, d.end_line});
    return finish(SampleKind::LineLoc, task,
                  line_loc_prompt(task.task.problem_statement, render_numbered(task.pre_files, regions)),
                  format_line_answer(task.gold.functions, task.gold.lines, task.skeletons), options);
}

SampleResult make_code_edit_sample(const PreparedTask& task, const SampleOptions& options)
{
    if (task.gold.files.empty())
        return SampleResult::skip("no_gold_files");
    if (task.edit_script.edits.empty())
        return SampleResult::skip("no_pre_edit_edits");
    RegionMap regions;
    if (task.gold_complete) {
        for (auto& [path, ranges] : gold_function_regions(task))
            if (task.before.count(path))
                regions[path] = ranges;
    }
    for (auto& [path, ranges] : search_regions(task))
        regions[path].insert(regions[path].end(), ranges.begin(), ranges.end());
    return finish(SampleKind::CodeEdit, task,
                  code_edit_prompt(task.task.problem_statement, render_numbered(task.before, regions)),
                  editfmt::render_edits(task.edit_script), options);
}

std::vector<SampleResult> make_samples(const PreparedTask& task, const SampleOptions& options)
{
    return {make_file_loc_sample(task, options), make_func_loc_sample(task, options),
            make_line_loc_sample(task, options), make_code_edit_sample(task, options)};
}

std::optional<std::string> token_filter(const TrainingSample& sample, std::size_t budget, const TokenCounter& counter)
{
    auto n = counter(sample.input_text + sample.output_text);
    if (n > budget)
        return std::string("token_budget");
    return std::nullopt;
}

// -- JSONL --------------------------------------------------------------------

void sort_samples(std::vector<TrainingSample>& samples)
{
    std::stable_sort(samples.begin(), samples.end(), [](const TrainingSample& a, const TrainingSample& b) {
        return std::tie(a.meta.repo, a.meta.pr_number, a.kind) < std::tie(b.meta.repo, b.meta.pr_number, b.kind);
    });
}

std::string to_jsonl_line(const TrainingSample& s)
{
    nlohmann::ordered_json j;
    j["kind"] = std::string(to_string(s.kind));
    j["input"] = s.input_text;
    j["output"] = s.output_text;
    nlohmann::ordered_json meta;
    meta["repo"] = s.meta.repo;
    meta["pr_number"] = s.meta.pr_number;
    meta["issue_numbers"] = s.meta.issue_numbers;
    meta["token_count"] = s.meta.token_count;
    meta["files"] = s.meta.files;
    j["meta"] = std::move(meta);
    return j.dump();
}

TrainingSample from_jsonl_line(std::string_view line)
{
    auto j = nlohmann::json::parse(line);
    TrainingSample s;
    s.kind = kind_from_string(j.at("kind").get<std::string>());
    s.input_text = j.at("input").get<std::string>();
    s.output_text = j.at("output").get<std::string>();
    const auto& m = j.at("meta");
    s.meta.repo = m.at("repo").get<std::string>();
    s.meta.pr_number = m.at("pr_number").get<std::uint64_t>();
    s.meta.issue_numbers = m.at("issue_numbers").get<std::vector<std::uint64_t>>();
    s.meta.token_count = m.at("token_count").get<std::size_t>();
    s.meta.files = m.at("files").get<std::vector<std::string>>();
    return s;
}

std::size_t emit_jsonl(std::vector<TrainingSample> samples, const fs::path& out_path)
{
    sort_samples(samples);
    if (out_path.has_parent_path())
        fs::create_directories(out_path.parent_path());
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + out_path.string());
    for (const auto& s : samples)
        out << to_jsonl_line(s) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + out_path.string());
    return samples.size();
}

std::vector<TrainingSample> read_jsonl(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path.string());
    std::vector<TrainingSample> out;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty())
            continue;
        out.push_back(from_jsonl_line(line));
    }
    return out;
}

}  // namespace resat::samplegen
