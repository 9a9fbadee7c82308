// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include "gold_cases.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

#include "cli.hpp"

#include <resat/ingest/client.hpp>
#include <resat/pipeline/drivers.hpp>
#include <resat/samplegen/dataset.hpp>

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace resat;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kBuildSeconds = 10.0;
constexpr double kRoundTripSeconds = 60.0;
constexpr int kRoundTripCases = 10000;
constexpr int kBm25Corpora = 200;
constexpr double kScoreTolerance = 1e-9;
constexpr std::size_t kTokenBudget = 32768;
constexpr std::uint64_t kGoldenSeed = 7;

// Hand tally of the fixture corpus (see tests/fixtures/README.md).
constexpr std::size_t kExpectedTasks = 15;
const std::map<std::string, std::size_t> kExpectedCounts{
    {"FileLoc", 12}, {"FuncLoc", 11}, {"LineLoc", 11}, {"CodeEdit", 12}};
constexpr std::size_t kExpectedEvalTasks = 12;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok)
            detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

int run_cli(std::vector<std::string> args, std::string* out = nullptr)
{
    args.insert(args.end(), {"--log-level", "error"});
    std::ostringstream s;
    int code = cli::run(args, s);
    if (out)
        *out = s.str();
    return code;
}

std::string corpus()
{
    return testing::corpus_dir().string();
}

std::string golden(const std::string& name)
{
    return (testing::source_dir() / "tests" / "golden" / name).string();
}

editfmt::FileMap read_tree(const fs::path& root)
{
    editfmt::FileMap out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file())
            out[fs::relative(e.path(), root).generic_string()] = ingest::read_file(e.path());
    return out;
}

std::vector<std::pair<std::string, std::string>> edit_cases()
{
    std::mt19937_64 rng(20241018);
    std::vector<std::pair<std::string, std::string>> cases;
    cases.reserve(kRoundTripCases);
    for (int i = 0; i < kRoundTripCases; ++i)
        cases.push_back(testing::random_edit_pair(rng));
    return cases;
}

// -- criteria -------------------------------------------------------------------

Outcome golden_dataset()
{
    Outcome o;
    testing::TempDir tmp;
    auto out = (tmp.path / "dataset.jsonl").string();
    auto report = (tmp.path / "dataset.report.json").string();
    auto t0 = Clock::now();
    int code = run_cli({"build", "--fixtures", corpus(), "--out", out, "--report", report, "--seed",
                        std::to_string(kGoldenSeed), "--token-budget", std::to_string(kTokenBudget)});
    double elapsed = seconds_since(t0);
    if (code != 0)
        o.fail("build exited with " + std::to_string(code));
    if (ingest::read_file(out) != ingest::read_file(golden("dataset.jsonl")))
        o.fail("JSONL differs from tests/golden/dataset.jsonl");
    if (ingest::read_file(report) != ingest::read_file(golden("dataset.report.json")))
        o.fail("run report differs from tests/golden/dataset.report.json");

    auto r = nlohmann::json::parse(ingest::read_file(report));
    if (r["tasks_in"] != kExpectedTasks)
        o.fail("tasks_in " + r["tasks_in"].dump());
    std::map<std::string, std::size_t> counted;
    for (const auto& s : samplegen::read_jsonl(out))
        ++counted[std::string(samplegen::to_string(s.kind))];
    if (counted != kExpectedCounts)
        o.fail("per-kind counts differ from the hand tally");
    if (elapsed >= kBuildSeconds)
        o.fail("build took " + fmt("%.2fs", elapsed));
    if (o.ok)
        o.detail = "46 samples (12/11/11/12) from 15 tasks, " + fmt("%.2fs", elapsed);
    return o;
}

Outcome edit_round_trip(const std::vector<std::pair<std::string, std::string>>& cases)
{
    Outcome o;
    auto t0 = Clock::now();
    std::size_t failures = 0, blocks = 0, non_unique = 0;
    for (const auto& [b, a] : cases) {
        editfmt::FileMap before{{"f.py", b}}, after{{"f.py", a}};
        auto script = editfmt::serialize_edits(before, after);
        try {
            if (editfmt::apply_edits(before, script) != after)
                ++failures;
            if (editfmt::parse_edits(editfmt::render_edits(script)) != script)
                ++failures;
        } catch (const editfmt::EditError&) {
            ++failures;
        }
        // Each search block must occur exactly once in the pre-edit file and in
        // the text it is applied to.
        std::string current = b;
        for (const auto& e : script.edits) {
            ++blocks;
            std::size_t in_before = 0, in_current = 0, at = std::string::npos;
            for (std::size_t i = 0; i + e.search.size() <= b.size(); ++i)
                in_before += b.compare(i, e.search.size(), e.search) == 0;
            for (std::size_t i = 0; i + e.search.size() <= current.size(); ++i)
                if (current.compare(i, e.search.size(), e.search) == 0) {
                    ++in_current;
                    at = i;
                }
            if (in_before != 1 || in_current != 1) {
                ++non_unique;
                break;
            }
            current.replace(at, e.search.size(), e.replace);
        }
    }
    double elapsed = seconds_since(t0);
    if (failures)
        o.fail(std::to_string(failures) + " round-trip failures");
    if (non_unique)
        o.fail(std::to_string(non_unique) + " search blocks not unique");
    if (elapsed >= kRoundTripSeconds)
        o.fail("took " + fmt("%.2fs", elapsed));
    if (o.ok)
        o.detail = std::to_string(cases.size()) + " cases, " + std::to_string(blocks) + " blocks unique, "
                   + fmt("%.2fs", elapsed);
    return o;
}

Outcome diff_round_trip(const std::vector<std::pair<std::string, std::string>>& cases)
{
    Outcome o;
    std::size_t failures = 0;
    for (const auto& [b, a] : cases) {
        editfmt::FileMap before{{"f.py", b}}, after{{"f.py", a}};
        try {
            auto diff = editfmt::to_unified_diff(before, after);
            if (diffmap::apply_diffs(before, diffmap::parse_unified_diff(diff)) != after)
                ++failures;
        } catch (const std::exception&) {
            ++failures;
        }
    }
    if (failures)
        o.fail(std::to_string(failures) + " random cases failed");

    std::size_t prs = 0;
    for (const auto& repo_dir : ingest::list_cached_repos(testing::corpus_dir())) {
        auto cached = ingest::load_cached_repo(repo_dir);
        for (const auto& pr : cached.data.prs) {
            if (pr.diff_text.empty())
                continue;
            auto pre = samplegen::snapshot_dir(repo_dir, pr.parent_sha);
            auto post = samplegen::snapshot_dir(repo_dir, pr.merge_commit_sha);
            if (!fs::is_directory(pre) || !fs::is_directory(post))
                continue;
            ++prs;
            try {
                if (diffmap::apply_diffs(read_tree(pre), diffmap::parse_unified_diff(pr.diff_text)) != read_tree(post))
                    o.fail(cached.repo.full_name() + "#" + std::to_string(pr.number) + " does not reproduce post-merge");
            } catch (const std::exception& e) {
                o.fail(cached.repo.full_name() + "#" + std::to_string(pr.number) + ": " + e.what());
            }
        }
    }
    if (prs < 10)
        o.fail("only " + std::to_string(prs) + " fixture PR diffs checked");
    if (o.ok)
        o.detail = std::to_string(cases.size()) + " random cases, " + std::to_string(prs) + " fixture PR diffs";
    return o;
}

Outcome bm25_oracle()
{
    Outcome o;
    std::mt19937_64 rng(99);
    const char* vocab[] = {"parse",  "Parser", "getValue", "HTTPClient", "cache_key", "v2",  "load",
                           "saveAll", "token", "x",        "merge",      "diff",      "node", "tree"};
    constexpr std::size_t kVocab = sizeof(vocab) / sizeof(vocab[0]);
    std::size_t queries = 0, ties = 0, compared = 0;
    double worst = 0;
    for (int c = 0; c < kBm25Corpora; ++c) {
        std::map<std::string, std::string> docs;
        std::size_t n = 1 + rng() % 10;
        std::string previous;
        for (std::size_t d = 0; d < n; ++d) {
            std::string text;
            // Duplicated documents produce exact score ties.
            if (!previous.empty() && rng() % 4 == 0) {
                text = previous;
            } else {
                std::size_t len = rng() % 100 / (1 + rng() % 4);
                for (std::size_t k = 0; k < len; ++k)
                    text += std::string(vocab[rng() % kVocab]) + (rng() % 3 ? " " : ".");
            }
            previous = text;
            docs["m" + std::to_string(rng() % 40) + ".py"] = text;
        }
        retrieval::Bm25Params p{1.2, 0.75};
        if (c % 2)
            p = {0.2 + static_cast<double>(rng() % 20) / 10.0, static_cast<double>(rng() % 11) / 10.0};
        retrieval::Bm25Index index(docs, p);
        for (int q = 0; q < 5; ++q) {
            std::string query;
            for (std::size_t k = 0, len = 1 + rng() % 8; k < len; ++k)
                query += std::string(vocab[rng() % kVocab]) + " ";
            std::size_t k = 1 + rng() % 10;
            auto got = index.query_top_k(query, k);
            auto want = testing::bm25_brute_force(docs, query, k, p);
            ++queries;
            if (got.size() != want.size()) {
                o.fail("result size " + std::to_string(got.size()) + " vs " + std::to_string(want.size()));
                continue;
            }
            for (std::size_t i = 0; i < got.size(); ++i) {
                ++compared;
                worst = std::max(worst, std::abs(got[i].score - want[i].score));
                if (got[i].path != want[i].path)
                    o.fail("order differs at rank " + std::to_string(i + 1));
                if (std::abs(got[i].score - want[i].score) > kScoreTolerance)
                    o.fail("score differs by more than 1e-9");
                if (i > 0 && got[i].score == got[i - 1].score)
                    ++ties;
            }
        }
    }
    if (o.ok)
        o.detail = std::to_string(kBm25Corpora) + " corpora, " + std::to_string(queries) + " queries, "
                   + std::to_string(compared) + " ranks, " + std::to_string(ties) + " ties, max |diff| "
                   + fmt("%.1e", worst);
    return o;
}

Outcome gold_fixtures()
{
    Outcome o;
    auto cases = testing::gold_cases();
    for (const auto& c : cases) {
        std::map<std::string, skeleton::FileSkeleton> sk;
        for (const auto& [path, text] : c.pre)
            if (ExclusionRules::defaults().is_analyzable(path))
                sk.emplace(path, skeleton::parse_file(path, text));
        try {
            if (diffmap::gold_labels(diffmap::parse_unified_diff(c.diff), sk) != c.expected)
                o.fail(c.name);
        } catch (const std::exception& e) {
            o.fail(c.name + ": " + e.what());
        }
    }
    if (cases.size() < 12)
        o.fail("fewer than 12 fixtures");
    if (o.ok)
        o.detail = std::to_string(cases.size()) + " hand-labelled diffs";
    return o;
}

Outcome skeleton_spans()
{
    Outcome o;
    std::size_t files = 0, decls = 0;
    auto mismatches = testing::compare_skeleton_oracle(files, decls);
    if (!mismatches.empty())
        o.fail(std::to_string(mismatches.size()) + " mismatches, first " + mismatches[0].file + ": "
               + mismatches[0].detail);

    auto spans = nlohmann::json::parse(ingest::read_file(golden("skeleton_spans.json")));
    bool multi_line = false, nested = false;
    for (const auto& [file, decl_list] : spans.items()) {
        if (!decl_list.is_array())
            continue;
        for (const auto& d : decl_list) {
            multi_line |= d["header_end_line"].get<int>() > d["start_line"].get<int>();
            nested |= d["qualified_name"].get<std::string>().find('.') != std::string::npos;
        }
    }
    if (!multi_line || !nested)
        o.fail("reference data lacks multi-line signatures or nesting");
    if (o.ok)
        o.detail = std::to_string(files) + " files, " + std::to_string(decls) + " declarations, 0 mismatches";
    return o;
}

Outcome oracle_end_to_end()
{
    Outcome o;
    auto tasks = samplegen::load_tasks(testing::corpus_dir());
    pipeline::PredictorFactory oracle = [](const samplegen::PreparedTask& t) {
        return std::make_unique<pipeline::OraclePredictor>(t);
    };
    std::string detail;
    for (auto driver : {pipeline::Driver::Agentless, pipeline::Driver::RagSwe}) {
        const std::string name(pipeline::to_string(driver));
        pipeline::EvalConfig config;
        config.driver = driver;
        auto run = pipeline::evaluate(tasks, oracle, config);
        auto j = nlohmann::json::parse(pipeline::to_json(run, driver));
        if (run.results.size() != kExpectedEvalTasks)
            o.fail(name + ": " + std::to_string(run.results.size()) + " tasks evaluated");
        if (!run.task_errors.empty())
            o.fail(name + ": " + run.task_errors.front());
        std::vector<std::string> scored{"file"};
        if (driver == pipeline::Driver::Agentless) {
            scored = {"file", "func", "line"};
        } else if (!j["func"].is_null() || !j["line"].is_null()) {
            o.fail("rag-swe reports function or line levels");
        }
        for (const auto& level : scored)
            for (const char* sem : {"instance_pct", "micro_pct"})
                if (j[level][sem] != 100.0)
                    o.fail(name + " " + level + " " + sem + " = " + j[level][sem].dump());
        if (run.edits_applied != run.results.size() || run.edits_matching_gold != run.results.size())
            o.fail(name + ": " + std::to_string(run.edits_matching_gold) + "/" + std::to_string(run.results.size())
                   + " edits reproduce gold");
        detail += (detail.empty() ? "" : "; ") + name + " " + std::to_string(run.results.size()) + " tasks 100%, edits "
                  + std::to_string(run.edits_matching_gold) + "/" + std::to_string(run.results.size());
    }
    if (o.ok)
        o.detail = detail + "; rag-swe func/line null";
    return o;
}

Outcome filter_contracts()
{
    Outcome o;
    samplegen::BuildConfig config;
    config.token_budget = kTokenBudget;
    auto tasks = samplegen::load_tasks(testing::corpus_dir());
    auto ds = samplegen::build_dataset(tasks, config);
    if (ds.report.dropped("token_budget", samplegen::SampleKind::FileLoc) != 1)
        o.fail("expected one FileLoc token_budget drop");
    for (const auto& s : ds.samples)
        if (s.meta.repo == "acme/datapipe" && s.meta.pr_number == 8)
            o.fail("oversized acme/datapipe#8 sample was kept");

    // The dropped sample really is over budget and the boundary is inclusive.
    for (const auto& src : tasks) {
        if (src.task.task_id() != "acme__datapipe-8")
            continue;
        auto prepared = samplegen::prepare_task(src.task, src.repo_dir);
        auto r = samplegen::make_file_loc_sample(prepared, config.sample);
        if (!r.sample)
            o.fail("no FileLoc sample for acme/datapipe#8");
        else {
            auto n = samplegen::count_tokens(r.sample->input_text + r.sample->output_text);
            if (n <= kTokenBudget || !samplegen::token_filter(*r.sample, kTokenBudget))
                o.fail("acme/datapipe#8 is within budget");
            if (samplegen::token_filter(*r.sample, n))
                o.fail("a sample at exactly the budget was dropped");
        }
    }

    ingest::ApiConfig offline;
    offline.offline = true;
    ingest::RepoClient client(offline, testing::fixtures_dir() / "select" / "cache", nullptr);
    auto nearmiss = client.fetch_repo_metadata("acme", "nearmiss");
    auto webtiny = client.fetch_repo_metadata("acme", "webtiny");
    if (nearmiss.star_count != 999 || webtiny.star_count != 1000 || webtiny.pr_count != 1000)
        o.fail("select fixtures changed");
    auto classified = ingest::classify_repos({nearmiss, webtiny}, {}, {});
    if (classified[0].excluded_reason != ingest::ExcludedReason::Stars)
        o.fail("999 stars not excluded");
    if (classified[1].excluded_reason)
        o.fail("1000 stars / 1000 PRs not selected");
    if (o.ok)
        o.detail = "acme/datapipe#8 dropped over 32768 tokens; 999 stars excluded, 1000 selected";
    return o;
}

Outcome determinism()
{
    Outcome o;
    testing::TempDir tmp;
    auto build = [&](const std::string& name, const std::string& workers) {
        auto out = (tmp.path / name).string();
        if (run_cli({"build", "--fixtures", corpus(), "--out", out, "--seed", std::to_string(kGoldenSeed),
                     "--workers", workers})
            != 0)
            o.fail("build " + name + " failed");
        return ingest::read_file(out) + ingest::read_file(fs::path(out).replace_extension(".report.json"));
    };
    auto a = build("a.jsonl", "1");
    auto b = build("b.jsonl", "1");
    auto c = build("c.jsonl", "4");
    if (a != b)
        o.fail("two runs differ");
    if (a != c)
        o.fail("workers 1 and 4 differ");
    if (o.ok)
        o.detail = "two runs and workers 1 vs 4 byte-identical";
    return o;
}

}  // namespace

int main()
{
    spdlog::set_level(spdlog::level::err);
    auto cases = edit_cases();

    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {1, "fixture dataset matches golden files", golden_dataset},
        {2, "search/replace round-trip", [&] { return edit_round_trip(cases); }},
        {3, "unified diff round-trip", [&] { return diff_round_trip(cases); }},
        {4, "BM25 matches brute force", bm25_oracle},
        {5, "gold-label fixtures", gold_fixtures},
        {6, "skeleton spans match reference parser", skeleton_spans},
        {7, "oracle predictor end-to-end", oracle_end_to_end},
        {8, "token budget and selection thresholds", filter_contracts},
        {9, "deterministic build", determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %d %s: %s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        failed += !o.ok;
    }
    std::fflush(stdout);
    return failed == 0 ? 0 : 1;
}
