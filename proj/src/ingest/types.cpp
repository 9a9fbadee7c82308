#include <resat/ingest/types.hpp>

#include <stdexcept>

namespace resat::ingest {

std::string_view to_string(ExcludedReason reason)
{
    switch (reason) {
    case ExcludedReason::Stars:
        return "stars";
    case ExcludedReason::PullRequests:
        return "pull_requests";
    case ExcludedReason::License:
        return "license";
    case ExcludedReason::Leakage:
        return "leakage";
    }
    return "stars";
}

namespace {
ExcludedReason reason_from_string(std::string_view s)
{
    for (auto r : {ExcludedReason::Stars, ExcludedReason::PullRequests, ExcludedReason::License,
                   ExcludedReason::Leakage}) {
        if (to_string(r) == s)
            return r;
    }
    throw std::invalid_argument("unknown exclusion reason: " + std::string(s));
}
}  // namespace

std::vector<std::uint64_t> LinkedTask::issue_numbers() const
{
    std::vector<std::uint64_t> out;
    for (const auto& i : issues)
        out.push_back(i.number);
    return out;
}

void to_json(nlohmann::json& j, const RepoRecord& r)
{
    j = nlohmann::json{{"owner", r.owner},
                       {"name", r.name},
                       {"star_count", r.star_count},
                       {"pr_count", r.pr_count},
                       {"default_branch", r.default_branch},
                       {"license_allows_use", r.license_allows_use}};
    j["download_rank"] = r.download_rank ? nlohmann::json(*r.download_rank) : nlohmann::json();
    j["excluded_reason"] = r.excluded_reason ? nlohmann::json(std::string(to_string(*r.excluded_reason)))
                                             : nlohmann::json();
}

void from_json(const nlohmann::json& j, RepoRecord& r)
{
    r.owner = j.at("owner").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.star_count = j.value("star_count", std::uint64_t{0});
    r.pr_count = j.value("pr_count", std::uint64_t{0});
    r.default_branch = j.value("default_branch", std::string("main"));
    r.license_allows_use = j.value("license_allows_use", false);
    r.download_rank.reset();
    if (j.contains("download_rank") && !j["download_rank"].is_null())
        r.download_rank = j["download_rank"].get<std::uint64_t>();
    r.excluded_reason.reset();
    if (j.contains("excluded_reason") && !j["excluded_reason"].is_null())
        r.excluded_reason = reason_from_string(j["excluded_reason"].get<std::string>());
}

void to_json(nlohmann::json& j, const PullRequest& pr)
{
    j = nlohmann::json{{"number", pr.number},
                       {"title", pr.title},
                       {"body", pr.body},
                       {"merged", pr.merged},
                       {"base_ref", pr.base_ref},
                       {"merge_commit_sha", pr.merge_commit_sha},
                       {"parent_sha", pr.parent_sha},
                       {"commit_messages", pr.commit_messages}};
}

void from_json(const nlohmann::json& j, PullRequest& pr)
{
    pr.number = j.at("number").get<std::uint64_t>();
    pr.title = j.value("title", std::string());
    pr.body = j.value("body", std::string());
    pr.merged = j.value("merged", false);
    pr.base_ref = j.value("base_ref", std::string());
    pr.merge_commit_sha = j.value("merge_commit_sha", std::string());
    pr.parent_sha = j.value("parent_sha", std::string());
    pr.commit_messages = j.value("commit_messages", std::vector<std::string>{});
}

void to_json(nlohmann::json& j, const IssueRecord& issue)
{
    j = nlohmann::json{{"number", issue.number}, {"title", issue.title}, {"body", issue.body}};
}

void from_json(const nlohmann::json& j, IssueRecord& issue)
{
    issue.number = j.at("number").get<std::uint64_t>();
    issue.title = j.value("title", std::string());
    issue.body = j.value("body", std::string());
}

}  // namespace resat::ingest
