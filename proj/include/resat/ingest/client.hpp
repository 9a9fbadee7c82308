#pragma once

#include <resat/core/http.hpp>
#include <resat/ingest/link.hpp>
#include <resat/ingest/types.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace resat::ingest {

class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RateLimited : public IngestError {
public:
    RateLimited(std::string target, std::chrono::seconds retry_after);
    std::chrono::seconds retry_after;
};

class NotFound : public IngestError {
public:
    explicit NotFound(std::string what);
};

class OfflineCacheMiss : public IngestError {
public:
    explicit OfflineCacheMiss(const std::filesystem::path& missing);
    std::filesystem::path missing;
};

struct ApiConfig {
    std::string base_url = "https://api.github.com";
    /// Sent as a bearer token when non-empty; read from RESAT_API_TOKEN by default.
    std::string token;
    bool offline = false;
    int per_page = 100;
    int max_retries = 3;
    /// Upper bound on a single honored Retry-After wait.
    std::chrono::seconds max_wait{120};
    std::chrono::milliseconds timeout{30000};

    static ApiConfig from_env();
};

struct RepoData {
    /// Ascending PR number.
    std::vector<PullRequest> prs;
    std::map<std::uint64_t, IssueRecord> issues;
};

/// Reads and writes the on-disk cache:
///
///     <cache>/<owner>__<name>/repo.json
///     <cache>/<owner>__<name>/prs/index.json       PR listing summaries
///     <cache>/<owner>__<name>/prs/<number>.json
///     <cache>/<owner>__<name>/issues/<number>.json  ({"missing": true} for 404s)
///     <cache>/<owner>__<name>/diffs/<number>.patch
///     <cache>/<owner>__<name>/raw/...               raw API pages
///     <cache>/<owner>__<name>/snapshots/<sha>/      checked-out trees
///
/// Every response is written (atomically) before it is used, so a warm cache
/// answers without touching the network. In offline mode a missing file is an
/// OfflineCacheMiss; `transport` may then be null.
class RepoClient {
public:
    RepoClient(ApiConfig config, std::filesystem::path cache_dir, http::Transport* transport);

    /// Stars, PR count, default branch and license for one candidate.
    RepoRecord fetch_repo_metadata(const std::string& owner, const std::string& name);

    RepoData fetch_repo_data(const RepoRecord& repo);

    std::filesystem::path repo_dir(const RepoRecord& repo) const;
    std::size_t requests_made() const { return requests_; }

private:
    std::string get_cached(const std::filesystem::path& file, const std::string& target,
                           const http::Headers& extra = {}, bool allow_404 = false);
    http::Response request(const std::string& target, const http::Headers& extra);
    std::filesystem::path dir_for(const std::string& owner, const std::string& name) const;

    ApiConfig config_;
    std::filesystem::path cache_dir_;
    http::Transport* transport_;
    std::size_t requests_ = 0;
};

RepoData fetch_repo_data(const RepoRecord& repo, const ApiConfig& api,
                         const std::filesystem::path& cache_dir, http::Transport* transport);

/// Reads repo.json, PR records, diffs and issues from a populated cache (the
/// fixture layout) without any network access.
struct CachedRepo {
    RepoRecord repo;
    RepoData data;
};
CachedRepo load_cached_repo(const std::filesystem::path& repo_dir);

/// Every `<owner>__<name>` directory with a repo.json, sorted by name.
std::vector<std::filesystem::path> list_cached_repos(const std::filesystem::path& cache_dir);

/// Byte-identical serialization of fetched data, used to check cache
/// transparency.
std::string serialize(const RepoData& data);

/// Writes via a temporary file and rename.
void write_atomic(const std::filesystem::path& file, std::string_view content);
std::string read_file(const std::filesystem::path& file);

/// Materializes `<repo_dir>/snapshots/<sha>/` from a git clone using
/// `git archive`. Returns the snapshot directory. Requires the git CLI.
std::filesystem::path materialize_snapshot(const std::filesystem::path& clone_dir,
                                           const std::filesystem::path& repo_dir,
                                           const std::string& sha);

/// Licenses accepted as allowing free use (SPDX ids).
bool license_allows_use(const std::string& spdx_id);

}  // namespace resat::ingest
