#include <resat/ingest/link.hpp>

#include <resat/core/text.hpp>

#include <algorithm>
#include <charconv>
#include <regex>
#include <stdexcept>

namespace resat::ingest {

std::vector<RepoRecord> classify_repos(std::vector<RepoRecord> candidates,
                                       const SelectionThresholds& thresholds,
                                       const std::set<std::string>& denylist)
{
    for (auto& r : candidates) {
        r.excluded_reason.reset();
        if (!r.license_allows_use)
            r.excluded_reason = ExcludedReason::License;
        else if (denylist.count(r.full_name()))
            r.excluded_reason = ExcludedReason::Leakage;
        else if (r.star_count < thresholds.star_min)
            r.excluded_reason = ExcludedReason::Stars;
        else if (r.pr_count < thresholds.pr_min)
            r.excluded_reason = ExcludedReason::PullRequests;
    }
    return candidates;
}

std::vector<RepoRecord> select_repos(const std::vector<RepoRecord>& candidates,
                                     const SelectionThresholds& thresholds,
                                     const std::set<std::string>& denylist)
{
    std::vector<RepoRecord> out;
    for (auto& r : classify_repos(candidates, thresholds, denylist)) {
        if (!r.excluded_reason)
            out.push_back(std::move(r));
    }
    return out;
}

namespace {

void collect_refs(std::string_view text, std::vector<std::uint64_t>& out)
{
    // Keyword forms ("closes #7") are a subset of the bare form.
    static const std::regex pattern(R"((?:^|[^A-Za-z0-9])#([0-9]+))");
    std::string s(text);
    for (auto it = std::sregex_iterator(s.begin(), s.end(), pattern); it != std::sregex_iterator(); ++it) {
        const auto digits = (*it)[1].str();
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || value == 0)
            continue;
        if (std::find(out.begin(), out.end(), value) == out.end())
            out.push_back(value);
    }
}

}  // namespace

std::vector<std::uint64_t> extract_issue_refs(std::string_view title,
                                              const std::vector<std::string>& commit_messages)
{
    std::vector<std::uint64_t> refs;
    collect_refs(title, refs);
    for (const auto& m : commit_messages)
        collect_refs(m, refs);
    return refs;
}

namespace {
std::string lf(std::string_view s)
{
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n')
            continue;
        out += s[i];
    }
    return out;
}
}  // namespace

std::string format_problem_statement(const std::vector<IssueRecord>& issues)
{
    auto sorted = issues;
    std::sort(sorted.begin(), sorted.end(),
              [](const IssueRecord& a, const IssueRecord& b) { return a.number < b.number; });
    std::vector<std::string> parts;
    for (const auto& i : sorted) {
        auto title = lf(text::trim(i.title));
        auto body = lf(text::trim(i.body));
        parts.push_back(body.empty() ? title : title + "\n\n" + body);
    }
    return text::join(parts, "\n\n");
}

std::vector<LinkedTask> link_tasks(const std::vector<PullRequest>& prs,
                                   const std::map<std::uint64_t, IssueRecord>& issues,
                                   const RepoRecord& repo)
{
    std::vector<LinkedTask> tasks;
    for (const auto& pr : prs) {
        if (!pr.merged || pr.base_ref != repo.default_branch)
            continue;
        LinkedTask task;
        for (auto number : extract_issue_refs(pr.title, pr.commit_messages)) {
            auto it = issues.find(number);
            if (it != issues.end())
                task.issues.push_back(it->second);
        }
        if (task.issues.empty())
            continue;
        std::sort(task.issues.begin(), task.issues.end(),
                  [](const IssueRecord& a, const IssueRecord& b) { return a.number < b.number; });
        task.repo = repo;
        task.pr = pr;
        task.problem_statement = format_problem_statement(task.issues);
        tasks.push_back(std::move(task));
    }
    std::sort(tasks.begin(), tasks.end(),
              [](const LinkedTask& a, const LinkedTask& b) { return a.pr.number < b.pr.number; });
    return tasks;
}

namespace {

std::vector<std::string> split_csv_row(std::string_view row)
{
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
        char c = row[i];
        if (quoted) {
            if (c == '"' && i + 1 < row.size() && row[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field += c;
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

}  // namespace

std::vector<Candidate> read_candidates_csv(std::string_view csv)
{
    auto lines = text::split_lines_bare(csv);
    if (lines.empty())
        throw std::invalid_argument("candidate CSV is empty");
    auto header = split_csv_row(text::rtrim(lines[0]));
    if (header != std::vector<std::string>{"rank", "package", "owner", "name"})
        throw std::invalid_argument("candidate CSV header must be rank,package,owner,name");
    std::vector<Candidate> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = text::rtrim(lines[i]);
        if (line.empty())
            continue;
        auto f = split_csv_row(line);
        if (f.size() != 4)
            throw std::invalid_argument("candidate CSV line " + std::to_string(i + 1) + " has "
                                        + std::to_string(f.size()) + " fields");
        Candidate c;
        auto [ptr, ec] = std::from_chars(f[0].data(), f[0].data() + f[0].size(), c.rank);
        if (ec != std::errc() || ptr != f[0].data() + f[0].size())
            throw std::invalid_argument("bad rank on candidate CSV line " + std::to_string(i + 1));
        c.package = f[1];
        c.owner = f[2];
        c.name = f[3];
        rows.push_back(std::move(c));
    }
    return rows;
}

std::string write_candidates_csv(const std::vector<Candidate>& rows)
{
    std::string out = "rank,package,owner,name\n";
    for (const auto& r : rows)
        out += std::to_string(r.rank) + "," + r.package + "," + r.owner + "," + r.name + "\n";
    return out;
}

namespace {

constexpr std::string_view kRepoCsvHeader =
    "owner,name,star_count,pr_count,default_branch,license_allows_use,download_rank,excluded_reason";

std::uint64_t parse_u64(const std::string& field, std::size_t line_no)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw std::invalid_argument("bad number '" + field + "' on repo CSV line " + std::to_string(line_no));
    return v;
}

}  // namespace

std::string write_repo_csv(const std::vector<RepoRecord>& records)
{
    std::string out(kRepoCsvHeader);
    out += '\n';
    for (const auto& r : records) {
        out += r.owner + "," + r.name + "," + std::to_string(r.star_count) + "," + std::to_string(r.pr_count) + ","
               + r.default_branch + "," + (r.license_allows_use ? "true" : "false") + ","
               + (r.download_rank ? std::to_string(*r.download_rank) : "") + ","
               + (r.excluded_reason ? std::string(to_string(*r.excluded_reason)) : "") + "\n";
    }
    return out;
}

std::vector<RepoRecord> read_repo_csv(std::string_view csv)
{
    auto lines = text::split_lines_bare(csv);
    if (lines.empty() || text::rtrim(lines[0]) != kRepoCsvHeader)
        throw std::invalid_argument("repo CSV header must be " + std::string(kRepoCsvHeader));
    std::vector<RepoRecord> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto line = text::rtrim(lines[i]);
        if (line.empty())
            continue;
        auto f = split_csv_row(line);
        if (f.size() != 8)
            throw std::invalid_argument("repo CSV line " + std::to_string(i + 1) + " has "
                                        + std::to_string(f.size()) + " fields");
        RepoRecord r;
        r.owner = f[0];
        r.name = f[1];
        r.star_count = parse_u64(f[2], i + 1);
        r.pr_count = parse_u64(f[3], i + 1);
        r.default_branch = f[4];
        r.license_allows_use = f[5] == "true";
        if (!f[6].empty())
            r.download_rank = parse_u64(f[6], i + 1);
        if (!f[7].empty()) {
            for (auto reason : {ExcludedReason::Stars, ExcludedReason::PullRequests, ExcludedReason::License,
                                ExcludedReason::Leakage})
                if (to_string(reason) == f[7])
                    r.excluded_reason = reason;
            if (!r.excluded_reason)
                throw std::invalid_argument("unknown exclusion reason '" + f[7] + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::set<std::string> read_denylist(std::string_view text)
{
    std::set<std::string> out;
    for (const auto& raw : text::split_lines_bare(text)) {
        auto line = text::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        out.insert(std::string(line));
    }
    return out;
}

}  // namespace resat::ingest
