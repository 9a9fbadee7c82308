#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace resat::ingest {

enum class ExcludedReason { Stars, PullRequests, License, Leakage };

std::string_view to_string(ExcludedReason reason);

struct RepoRecord {
    std::string owner;
    std::string name;
    std::uint64_t star_count = 0;
    std::uint64_t pr_count = 0;
    std::string default_branch = "main";
    bool license_allows_use = false;
    std::optional<std::uint64_t> download_rank;
    std::optional<ExcludedReason> excluded_reason;

    std::string full_name() const { return owner + "/" + name; }
    /// Directory name used in the on-disk cache.
    std::string cache_key() const { return owner + "__" + name; }

    bool operator==(const RepoRecord&) const = default;
};

struct PullRequest {
    std::uint64_t number = 0;
    std::string title;
    std::string body;
    bool merged = false;
    std::string base_ref;
    std::string merge_commit_sha;
    /// First parent of the merge commit: the pre-merge snapshot.
    std::string parent_sha;
    std::vector<std::string> commit_messages;
    std::string diff_text;

    bool operator==(const PullRequest&) const = default;
};

struct IssueRecord {
    std::uint64_t number = 0;
    std::string title;
    std::string body;

    bool operator==(const IssueRecord&) const = default;
};

struct LinkedTask {
    RepoRecord repo;
    PullRequest pr;
    /// Ascending issue number.
    std::vector<IssueRecord> issues;
    std::string problem_statement;

    /// "<owner>__<name>-<pr number>"
    std::string task_id() const { return repo.cache_key() + "-" + std::to_string(pr.number); }
    std::vector<std::uint64_t> issue_numbers() const;
};

void to_json(nlohmann::json& j, const RepoRecord& r);
void from_json(const nlohmann::json& j, RepoRecord& r);
/// diff_text is not part of the JSON form; diffs live in their own files.
void to_json(nlohmann::json& j, const PullRequest& pr);
void from_json(const nlohmann::json& j, PullRequest& pr);
void to_json(nlohmann::json& j, const IssueRecord& issue);
void from_json(const nlohmann::json& j, IssueRecord& issue);

}  // namespace resat::ingest
