#include <doctest.h>

#include "oracles.hpp"

#include <resat/ingest/link.hpp>

using namespace resat::ingest;
using Refs = std::vector<std::uint64_t>;

namespace {

RepoRecord repo(std::string name, std::uint64_t stars, std::uint64_t prs, bool license = true)
{
    RepoRecord r;
    r.owner = "o";
    r.name = std::move(name);
    r.star_count = stars;
    r.pr_count = prs;
    r.license_allows_use = license;
    return r;
}

PullRequest pr(std::uint64_t number, std::string title, bool merged = true, std::string base = "main")
{
    PullRequest p;
    p.number = number;
    p.title = std::move(title);
    p.merged = merged;
    p.base_ref = std::move(base);
    if (merged) {
        p.merge_commit_sha = "m" + std::to_string(number);
        p.parent_sha = "p" + std::to_string(number);
    }
    return p;
}

}  // namespace

TEST_CASE("classify at the thresholds")
{
    auto out = classify_repos({repo("a", 999, 5000), repo("b", 1000, 1000), repo("c", 5000, 999),
                               repo("d", 5000, 5000, false), repo("leak", 5000, 5000)},
                              {}, {"o/leak"});
    REQUIRE(out.size() == 5);
    CHECK(out[0].excluded_reason == ExcludedReason::Stars);
    CHECK_FALSE(out[1].excluded_reason.has_value());
    CHECK(out[2].excluded_reason == ExcludedReason::PullRequests);
    CHECK(out[3].excluded_reason == ExcludedReason::License);
    CHECK(out[4].excluded_reason == ExcludedReason::Leakage);

    auto selected = select_repos(out, {}, {"o/leak"});
    REQUIRE(selected.size() == 1);
    CHECK(selected[0].name == "b");
    CHECK(select_repos(selected, {}, {"o/leak"}) == selected);

    SelectionThresholds low{10, 10};
    CHECK(select_repos({repo("x", 10, 10)}, low, {}).size() == 1);
}

TEST_CASE("extract_issue_refs")
{
    CHECK(extract_issue_refs("Fixes #123", {}) == Refs{123});
    CHECK(extract_issue_refs("refactor", {"closes #7 and #7 again", "see #9"}) == Refs{7, 9});
    CHECK(extract_issue_refs("v1.2#3 tag", {}).empty());
    CHECK(extract_issue_refs("a#12b", {}).empty());
    CHECK(extract_issue_refs("#5 first", {"(#6)", "RESOLVED #5"}) == Refs{5, 6});
    CHECK(extract_issue_refs("#", {"# 4"}).empty());

    auto base = extract_issue_refs("x #1", {"#2"});
    auto more = extract_issue_refs("x #1", {"#2", "#3 #1"});
    for (auto n : base)
        CHECK(std::find(more.begin(), more.end(), n) != more.end());
}

TEST_CASE("link_tasks")
{
    auto r = repo("r", 1000, 1000);
    std::map<std::uint64_t, IssueRecord> issues{{1, {1, "Bug", "body one"}}, {2, {2, "Other", "two\r\nlines"}}};

    CHECK(link_tasks({pr(5, "Fix #1")}, issues, r).size() == 1);
    CHECK(link_tasks({pr(5, "Fix #1", false)}, issues, r).empty());
    CHECK(link_tasks({pr(5, "Fix #1", true, "develop")}, issues, r).empty());
    CHECK(link_tasks({pr(5, "Fix #999")}, issues, r).empty());
    CHECK(link_tasks({pr(5, "cleanup")}, issues, r).empty());

    auto multi = pr(6, "Fix #2 and #999");
    multi.commit_messages = {"also #1"};
    auto tasks = link_tasks({multi, pr(5, "Fix #1")}, issues, r);
    REQUIRE(tasks.size() == 2);
    CHECK(tasks[0].pr.number == 5);
    CHECK(tasks[1].issue_numbers() == Refs{1, 2});
    CHECK(tasks[1].problem_statement == "Bug\n\nbody one\n\nOther\n\ntwo\nlines");
    CHECK(tasks[1].task_id() == "o__r-6");
}

TEST_CASE("csv round-trips")
{
    auto text = resat::ingest::read_file(resat::testing::fixtures_dir() / "select" / "candidates.csv");
    auto rows = read_candidates_csv(text);
    REQUIRE(rows.size() == 7);
    CHECK(rows[2].name == "nearmiss");
    CHECK(rows[2].rank == 3);
    CHECK(write_candidates_csv(rows) == text);

    auto classified = classify_repos({repo("a", 999, 5000), repo("b", 1000, 1000)}, {}, {});
    classified[1].download_rank = 4;
    CHECK(read_repo_csv(write_repo_csv(classified)) == classified);

    CHECK(read_denylist("# comment\n\nacme/x\n  acme/y  \n") == std::set<std::string>{"acme/x", "acme/y"});
}
