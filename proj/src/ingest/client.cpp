#include <resat/ingest/client.hpp>

#include <resat/core/text.hpp>

#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace resat::ingest {

RateLimited::RateLimited(std::string target, std::chrono::seconds retry_after_)
    : IngestError("rate limited on " + target + " (retry after " + std::to_string(retry_after_.count()) + "s)")
    , retry_after(retry_after_)
{
}

NotFound::NotFound(std::string what)
    : IngestError("not found: " + what)
{
}

OfflineCacheMiss::OfflineCacheMiss(const fs::path& missing_)
    : IngestError("offline mode and no cached entry at " + missing_.string())
    , missing(missing_)
{
}

ApiConfig ApiConfig::from_env()
{
    ApiConfig c;
    if (const char* token = std::getenv("RESAT_API_TOKEN"))
        c.token = token;
    return c;
}

void write_atomic(const fs::path& file, std::string_view content)
{
    static std::atomic<unsigned> counter{0};
    fs::create_directories(file.parent_path());
    auto tmp = file;
    tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IngestError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw IngestError("cannot write " + tmp.string());
    }
    fs::rename(tmp, file);
}

std::string read_file(const fs::path& file)
{
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw IngestError("cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool license_allows_use(const std::string& spdx_id)
{
    static const std::set<std::string> allowed{
        "MIT",        "MIT-0",       "Apache-2.0",  "BSD-2-Clause", "BSD-3-Clause", "ISC",
        "PSF-2.0",    "Python-2.0",  "MPL-2.0",     "LGPL-2.1",     "LGPL-3.0",     "GPL-2.0",
        "GPL-3.0",    "AGPL-3.0",    "Unlicense",   "0BSD",         "Zlib",         "EPL-2.0",
        "BSL-1.0",    "CC0-1.0",     "HPND",        "Artistic-2.0", "EUPL-1.2",     "ECL-2.0"};
    return allowed.count(spdx_id) > 0;
}

namespace {

std::string str(const json& j, const char* key)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return {};
    return it->get<std::string>();
}

json parse_json(const std::string& body, const std::string& what)
{
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw IngestError("invalid JSON in " + what + ": " + e.what());
    }
}

}  // namespace

RepoClient::RepoClient(ApiConfig config, fs::path cache_dir, http::Transport* transport)
    : config_(std::move(config))
    , cache_dir_(std::move(cache_dir))
    , transport_(transport)
{
}

fs::path RepoClient::dir_for(const std::string& owner, const std::string& name) const
{
    return cache_dir_ / (owner + "__" + name);
}

fs::path RepoClient::repo_dir(const RepoRecord& repo) const
{
    return dir_for(repo.owner, repo.name);
}

http::Response RepoClient::request(const std::string& target, const http::Headers& extra)
{
    if (!transport_)
        throw IngestError("no transport configured for " + target);
    http::Headers headers{{"Accept", "application/vnd.github+json"}, {"User-Agent", "resat-toolkit"}};
    if (!config_.token.empty())
        headers["Authorization"] = "Bearer " + config_.token;
    for (const auto& [k, v] : extra)
        headers[k] = v;

    for (int attempt = 0;; ++attempt) {
        auto resp = transport_->get(target, headers);
        ++requests_;
        const bool limited = resp.status == 429
                             || (resp.status == 403 && resp.header("x-ratelimit-remaining") == "0");
        if (!limited)
            return resp;

        std::chrono::seconds wait{60};
        if (auto ra = resp.header("retry-after"); !ra.empty()) {
            wait = std::chrono::seconds(std::strtoll(ra.c_str(), nullptr, 10));
        } else if (auto reset = resp.header("x-ratelimit-reset"); !reset.empty()) {
            auto delta = std::strtoll(reset.c_str(), nullptr, 10) - static_cast<long long>(std::time(nullptr));
            wait = std::chrono::seconds(delta > 0 ? delta : 1);
        }
        if (attempt >= config_.max_retries || wait > config_.max_wait)
            throw RateLimited(target, wait);
        spdlog::warn("rate limited on {}; retrying in {}s", target, wait.count());
        std::this_thread::sleep_for(wait);
    }
}

std::string RepoClient::get_cached(const fs::path& file, const std::string& target,
                                   const http::Headers& extra, bool allow_404)
{
    if (fs::exists(file))
        return read_file(file);
    if (config_.offline)
        throw OfflineCacheMiss(file);
    auto resp = request(target, extra);
    if (resp.status == 404) {
        if (allow_404)
            return {};
        throw NotFound(target);
    }
    if (resp.status < 200 || resp.status >= 300)
        throw IngestError("HTTP " + std::to_string(resp.status) + " for " + target);
    write_atomic(file, resp.body);
    return resp.body;
}

RepoRecord RepoClient::fetch_repo_metadata(const std::string& owner, const std::string& name)
{
    const auto dir = dir_for(owner, name);
    const auto record_file = dir / "repo.json";
    if (fs::exists(record_file))
        return parse_json(read_file(record_file), record_file.string()).get<RepoRecord>();
    if (config_.offline)
        throw OfflineCacheMiss(record_file);

    const std::string base = "/repos/" + owner + "/" + name;
    auto meta = parse_json(get_cached(dir / "raw" / "repo.json", base), base);
    const std::string search = "/search/issues?q=repo:" + owner + "/" + name + "+is:pr&per_page=1";
    auto prs = parse_json(get_cached(dir / "raw" / "pr_count.json", search), search);

    RepoRecord r;
    r.owner = owner;
    r.name = name;
    r.star_count = meta.value("stargazers_count", std::uint64_t{0});
    r.default_branch = str(meta, "default_branch");
    if (meta.contains("license") && meta["license"].is_object())
        r.license_allows_use = license_allows_use(str(meta["license"], "spdx_id"));
    r.pr_count = prs.value("total_count", std::uint64_t{0});
    write_atomic(record_file, json(r).dump(2) + "\n");
    return r;
}

RepoData RepoClient::fetch_repo_data(const RepoRecord& repo)
{
    const auto dir = repo_dir(repo);
    const std::string base = "/repos/" + repo.owner + "/" + repo.name;

    json index;
    const auto index_file = dir / "prs" / "index.json";
    if (fs::exists(index_file)) {
        index = parse_json(read_file(index_file), index_file.string());
    } else {
        if (config_.offline)
            throw OfflineCacheMiss(index_file);
        index = json::array();
        for (int page = 1;; ++page) {
            const std::string target = base + "/pulls?state=closed&per_page=" + std::to_string(config_.per_page)
                                       + "&page=" + std::to_string(page);
            auto items = parse_json(get_cached(dir / "raw" / ("pulls_page_" + std::to_string(page) + ".json"), target),
                                    target);
            for (const auto& item : items) {
                json summary{{"number", item.at("number")},
                             {"title", str(item, "title")},
                             {"body", str(item, "body")},
                             {"merged", item.contains("merged_at") && !item["merged_at"].is_null()},
                             {"base_ref", item.contains("base") ? str(item["base"], "ref") : std::string()},
                             {"merge_commit_sha", str(item, "merge_commit_sha")}};
                index.push_back(std::move(summary));
            }
            if (static_cast<int>(items.size()) < config_.per_page)
                break;
        }
        write_atomic(index_file, index.dump(2) + "\n");
    }

    RepoData data;
    std::set<std::uint64_t> wanted_issues;
    for (const auto& summary : index) {
        const auto number = summary.at("number").get<std::uint64_t>();
        const auto pr_file = dir / "prs" / (std::to_string(number) + ".json");
        PullRequest pr;
        if (fs::exists(pr_file)) {
            pr = parse_json(read_file(pr_file), pr_file.string()).get<PullRequest>();
        } else {
            if (config_.offline)
                throw OfflineCacheMiss(pr_file);
            pr.number = number;
            pr.title = summary.value("title", std::string());
            pr.body = summary.value("body", std::string());
            pr.merged = summary.value("merged", false);
            pr.base_ref = summary.value("base_ref", std::string());
            pr.merge_commit_sha = summary.value("merge_commit_sha", std::string());
            if (pr.merged && pr.base_ref == repo.default_branch) {
                const auto n = std::to_string(number);
                const std::string commits_target = base + "/pulls/" + n + "/commits?per_page=100";
                auto commits = parse_json(get_cached(dir / "raw" / ("commits_" + n + ".json"), commits_target),
                                          commits_target);
                for (const auto& c : commits) {
                    if (c.contains("commit"))
                        pr.commit_messages.push_back(str(c["commit"], "message"));
                }
                const std::string commit_target = base + "/commits/" + pr.merge_commit_sha;
                auto merge = parse_json(
                    get_cached(dir / "raw" / ("commit_" + pr.merge_commit_sha + ".json"), commit_target),
                    commit_target);
                if (merge.contains("parents") && !merge["parents"].empty())
                    pr.parent_sha = str(merge["parents"][0], "sha");
            }
            write_atomic(pr_file, json(pr).dump(2) + "\n");
        }

        if (pr.merged && pr.base_ref == repo.default_branch) {
            const auto n = std::to_string(number);
            pr.diff_text = get_cached(dir / "diffs" / (n + ".patch"), base + "/pulls/" + n,
                                      {{"Accept", "application/vnd.github.v3.diff"}});
            for (auto ref : extract_issue_refs(pr.title, pr.commit_messages))
                wanted_issues.insert(ref);
        }
        data.prs.push_back(std::move(pr));
    }
    std::sort(data.prs.begin(), data.prs.end(),
              [](const PullRequest& a, const PullRequest& b) { return a.number < b.number; });

    for (auto number : wanted_issues) {
        const auto n = std::to_string(number);
        const auto issue_file = dir / "issues" / (n + ".json");
        json record;
        if (fs::exists(issue_file)) {
            record = parse_json(read_file(issue_file), issue_file.string());
        } else {
            if (config_.offline)
                throw OfflineCacheMiss(issue_file);
            const std::string target = base + "/issues/" + n;
            auto body = get_cached(dir / "raw" / ("issue_" + n + ".json"), target, {}, true);
            if (body.empty()) {
                record = json{{"number", number}, {"missing", true}};
            } else {
                auto raw = parse_json(body, target);
                if (raw.contains("pull_request"))
                    record = json{{"number", number}, {"missing", true}, {"reason", "pull_request"}};
                else
                    record = json{{"number", number}, {"title", str(raw, "title")}, {"body", str(raw, "body")}};
            }
            write_atomic(issue_file, record.dump(2) + "\n");
        }
        if (record.value("missing", false))
            continue;
        data.issues[number] = record.get<IssueRecord>();
    }
    return data;
}

RepoData fetch_repo_data(const RepoRecord& repo, const ApiConfig& api, const fs::path& cache_dir,
                         http::Transport* transport)
{
    RepoClient client(api, cache_dir, transport);
    return client.fetch_repo_data(repo);
}

CachedRepo load_cached_repo(const fs::path& repo_dir)
{
    const auto record_file = repo_dir / "repo.json";
    if (!fs::exists(record_file))
        throw OfflineCacheMiss(record_file);
    CachedRepo out;
    out.repo = parse_json(read_file(record_file), record_file.string()).get<RepoRecord>();
    ApiConfig offline;
    offline.offline = true;
    RepoClient client(offline, repo_dir.parent_path(), nullptr);
    out.data = client.fetch_repo_data(out.repo);
    return out;
}

std::vector<fs::path> list_cached_repos(const fs::path& cache_dir)
{
    std::vector<fs::path> out;
    if (!fs::is_directory(cache_dir))
        throw OfflineCacheMiss(cache_dir);
    for (const auto& entry : fs::directory_iterator(cache_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / "repo.json"))
            out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string serialize(const RepoData& data)
{
    json j;
    j["prs"] = json::array();
    for (const auto& pr : data.prs) {
        json p = pr;
        p["diff_text"] = pr.diff_text;
        j["prs"].push_back(std::move(p));
    }
    j["issues"] = json::array();
    for (const auto& [_, issue] : data.issues)
        j["issues"].push_back(issue);
    return j.dump(2) + "\n";
}

namespace {
std::string shell_quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}
}  // namespace

fs::path materialize_snapshot(const fs::path& clone_dir, const fs::path& repo_dir, const std::string& sha)
{
    const auto dest = repo_dir / "snapshots" / sha;
    if (fs::exists(dest))
        return dest;
    for (char c : sha) {
        if (!std::isxdigit(static_cast<unsigned char>(c)))
            throw IngestError("refusing non-hex snapshot id " + sha);
    }
    auto tmp = dest;
    tmp += ".tmp." + std::to_string(::getpid());
    fs::remove_all(tmp);
    fs::create_directories(tmp);
    const auto tarball = tmp.string() + ".tar";
    const std::string archive = "git -C " + shell_quote(clone_dir.string()) + " archive --format=tar -o "
                                + shell_quote(tarball) + " " + sha;
    const std::string extract = "tar -x -f " + shell_quote(tarball) + " -C " + shell_quote(tmp.string());
    const bool ok = std::system(archive.c_str()) == 0 && std::system(extract.c_str()) == 0;
    fs::remove(tarball);
    if (!ok) {
        fs::remove_all(tmp);
        throw IngestError("git archive failed for " + sha);
    }
    fs::rename(tmp, dest);
    return dest;
}

}  // namespace resat::ingest
