#pragma once

#include <resat/ingest/types.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace resat::ingest {

struct SelectionThresholds {
    std::uint64_t star_min = 1000;
    std::uint64_t pr_min = 1000;
};

/// Sets excluded_reason on every record that fails a predicate (license,
/// leakage denylist, stars, pull requests; first failure wins) and clears it
/// on the rest. Order is preserved.
std::vector<RepoRecord> classify_repos(std::vector<RepoRecord> candidates,
                                       const SelectionThresholds& thresholds,
                                       const std::set<std::string>& denylist);

/// The records that pass every predicate, in input order.
std::vector<RepoRecord> select_repos(const std::vector<RepoRecord>& candidates,
                                     const SelectionThresholds& thresholds,
                                     const std::set<std::string>& denylist);

/// Issue numbers referenced as `#<digits>` (which also covers "fixes #12"
/// and friends) where the '#' is at the start of the text or follows a
/// non-alphanumeric character. Deduplicated, first-occurrence order.
std::vector<std::uint64_t> extract_issue_refs(std::string_view title,
                                              const std::vector<std::string>& commit_messages);

/// Issue titles and bodies in ascending number order: "title\n\nbody" per
/// issue, issues separated by one blank line. CRLF is normalized to LF.
std::string format_problem_statement(const std::vector<IssueRecord>& issues);

/// One task per PR that is merged into the default branch and references at
/// least one issue present in `issues`. Sorted by PR number.
std::vector<LinkedTask> link_tasks(const std::vector<PullRequest>& prs,
                                   const std::map<std::uint64_t, IssueRecord>& issues,
                                   const RepoRecord& repo);

/// Candidate CSV with header `rank,package,owner,name`.
struct Candidate {
    std::uint64_t rank = 0;
    std::string package;
    std::string owner;
    std::string name;
};

std::vector<Candidate> read_candidates_csv(std::string_view csv);
std::string write_candidates_csv(const std::vector<Candidate>& rows);

/// Classified repository records, one per row; `excluded_reason` is empty
/// for selected repositories.
std::string write_repo_csv(const std::vector<RepoRecord>& records);
std::vector<RepoRecord> read_repo_csv(std::string_view csv);

/// `owner/name` per line; blank lines and `#` comments ignored.
std::set<std::string> read_denylist(std::string_view text);

}  // namespace resat::ingest
