#include "cli.hpp"

#include <resat/core/http.hpp>
#include <resat/core/parallel.hpp>
#include <resat/editfmt/search_replace.hpp>
#include <resat/ingest/client.hpp>
#include <resat/ingest/link.hpp>
#include <resat/pipeline/drivers.hpp>
#include <resat/repostruct/tree.hpp>
#include <resat/retrieval/bm25.hpp>
#include <resat/samplegen/dataset.hpp>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

namespace fs = std::filesystem;

namespace resat::cli {

namespace {

struct Options {
    std::uint64_t star_min = 1000;
    std::uint64_t pr_min = 1000;
    std::size_t token_budget = 32768;
    std::size_t distractors = 2;
    std::uint64_t seed = 0;
    double k1 = 1.2;
    double b = 0.75;
    std::size_t top_k = 3;
    std::string cache = "resat-cache";
    std::string fixtures;
    std::string out;
    std::string report;
    bool offline = false;
    bool strict = false;
    std::size_t workers = 0;
    std::string chat_template = "none";
    std::string log_level = "warn";

    // select / scrape
    std::string candidates;
    std::string denylist;
    std::string repos;
    std::string clones;
    std::string api_url;

    // eval
    std::string driver = "agentless";
    std::string predictor = "oracle";
    std::string endpoint;
    std::string stub_text;
    int predictor_timeout_ms = 60000;
    int predictor_retries = 2;

    // apply
    std::string edits;
    std::string root;
    bool emit_diff = false;

    // retrieve
    std::string query;
    std::string query_file;

    // stats
    std::string in;
};

void validate(const Options& o)
{
    if (o.star_min == 0 || o.pr_min == 0)
        throw ConfigError("--star-min and --pr-min must be positive");
    if (o.token_budget == 0)
        throw ConfigError("--token-budget must be positive");
    if (o.top_k == 0)
        throw ConfigError("--top-k must be positive");
    if (!(o.k1 > 0))
        throw ConfigError("--k1 must be positive");
    if (!(o.b >= 0 && o.b <= 1))
        throw ConfigError("--b must lie in [0, 1]");
    chat_template_from_string(o.chat_template);
}

std::string read_text(const std::string& path, const char* what)
{
    if (path.empty())
        throw ConfigError(std::string("missing ") + what);
    if (!fs::is_regular_file(path))
        throw ConfigError(std::string(what) + " not found: " + path);
    return ingest::read_file(path);
}

/// Writes to `path`, or to `out` when the path is empty or "-".
void write_output(const std::string& path, std::string_view content, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << content;
        return;
    }
    if (fs::path(path).has_parent_path())
        fs::create_directories(fs::path(path).parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    if (!f)
        throw std::runtime_error("cannot write " + path);
}

fs::path source_dir(const Options& o)
{
    fs::path dir = o.fixtures.empty() ? fs::path(o.cache) : fs::path(o.fixtures);
    if (!fs::is_directory(dir))
        throw ConfigError("corpus directory not found: " + dir.string());
    return dir;
}

ingest::ApiConfig api_config(const Options& o)
{
    auto api = ingest::ApiConfig::from_env();
    api.offline = o.offline;
    if (!o.api_url.empty())
        api.base_url = o.api_url;
    return api;
}

std::unique_ptr<http::Transport> make_transport(const ingest::ApiConfig& api)
{
    if (api.offline)
        return nullptr;
    return http::make_http_transport(api.base_url, api.timeout, std::make_shared<http::RateGate>());
}

int cmd_select(const Options& o, std::ostream& out)
{
    auto candidates = ingest::read_candidates_csv(read_text(o.candidates, "--candidates"));
    std::set<std::string> denylist;
    if (!o.denylist.empty())
        denylist = ingest::read_denylist(read_text(o.denylist, "--denylist"));

    auto api = api_config(o);
    auto transport = make_transport(api);
    ingest::RepoClient client(api, o.cache, transport.get());
    std::vector<ingest::RepoRecord> records;
    std::size_t failures = 0;
    for (const auto& c : candidates) {
        try {
            auto r = client.fetch_repo_metadata(c.owner, c.name);
            r.download_rank = c.rank;
            records.push_back(std::move(r));
        } catch (const ingest::IngestError& e) {
            spdlog::error("{}/{}: {}", c.owner, c.name, e.what());
            ++failures;
        }
    }
    auto classified = ingest::classify_repos(records, {o.star_min, o.pr_min}, denylist);
    write_output(o.out, ingest::write_repo_csv(classified), out);
    auto selected = std::count_if(classified.begin(), classified.end(),
                                  [](const auto& r) { return !r.excluded_reason; });
    spdlog::info("selected {} of {} repositories", selected, classified.size());
    return failures > 0 && o.strict ? 1 : 0;
}

int cmd_scrape(const Options& o, std::ostream& out)
{
    auto records = ingest::read_repo_csv(read_text(o.repos, "--repos"));
    auto api = api_config(o);
    auto transport = make_transport(api);
    ingest::RepoClient client(api, o.cache, transport.get());
    std::size_t failures = 0;
    for (const auto& repo : records) {
        if (repo.excluded_reason)
            continue;
        try {
            const auto dir = client.repo_dir(repo);
            if (!fs::exists(dir / "repo.json"))
                ingest::write_atomic(dir / "repo.json", nlohmann::json(repo).dump(2) + "\n");
            auto data = client.fetch_repo_data(repo);
            auto tasks = ingest::link_tasks(data.prs, data.issues, repo);
            if (!o.clones.empty()) {
                const auto clone = fs::path(o.clones) / repo.cache_key();
                for (const auto& t : tasks) {
                    try {
                        ingest::materialize_snapshot(clone, dir, t.pr.parent_sha);
                        ingest::materialize_snapshot(clone, dir, t.pr.merge_commit_sha);
                    } catch (const ingest::IngestError& e) {
                        spdlog::error("{}: {}", t.task_id(), e.what());
                        ++failures;
                    }
                }
            }
            out << repo.full_name() << ": " << data.prs.size() << " pull requests, " << data.issues.size()
                << " issues, " << tasks.size() << " linked tasks\n";
        } catch (const ingest::IngestError& e) {
            spdlog::error("{}: {}", repo.full_name(), e.what());
            ++failures;
        }
    }
    return failures > 0 && o.strict ? 1 : 0;
}

int cmd_build(const Options& o, std::ostream& out)
{
    if (o.out.empty())
        throw ConfigError("build needs --out");
    samplegen::BuildConfig config;
    config.sample.distractor_count = o.distractors;
    config.sample.seed = o.seed;
    config.token_budget = o.token_budget;
    config.workers = o.workers;
    auto ds = samplegen::build_dataset(source_dir(o), config);

    auto tmpl = chat_template_from_string(o.chat_template);
    if (tmpl != ChatTemplate::None) {
        for (auto& s : ds.samples) {
            auto [in, outp] = apply_chat_template(tmpl, s.input_text, s.output_text);
            s.input_text = std::move(in);
            s.output_text = std::move(outp);
        }
    }
    auto n = samplegen::emit_jsonl(ds.samples, o.out);
    auto report_path = o.report.empty() ? fs::path(o.out).replace_extension(".report.json").string() : o.report;
    write_output(report_path, samplegen::to_json(ds.report), out);
    out << "wrote " << n << " samples from " << ds.report.tasks_in << " tasks to " << o.out << "\n";
    return !ds.report.task_errors.empty() && o.strict ? 1 : 0;
}

int cmd_eval(const Options& o, std::ostream& out)
{
    pipeline::EvalConfig config;
    try {
        config.driver = pipeline::driver_from_string(o.driver);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    config.rag.top_k = o.top_k;
    config.rag.params = {o.k1, o.b};
    config.workers = o.workers;

    pipeline::PredictorFactory factory;
    if (o.predictor == "oracle") {
        factory = [](const samplegen::PreparedTask& t) { return std::make_unique<pipeline::OraclePredictor>(t); };
    } else if (o.predictor == "stub") {
        factory = [text = o.stub_text](const samplegen::PreparedTask&) {
            return std::make_unique<pipeline::StubPredictor>(text);
        };
    } else if (o.predictor == "http") {
        if (o.endpoint.empty())
            throw ConfigError("--predictor http needs --endpoint");
        pipeline::HttpPredictorConfig hc{o.endpoint, std::chrono::milliseconds(o.predictor_timeout_ms),
                                         o.predictor_retries};
        pipeline::HttpPredictor probe(hc);  // validates the URL up front
        factory = [hc](const samplegen::PreparedTask&) { return std::make_unique<pipeline::HttpPredictor>(hc); };
    } else {
        throw ConfigError("unknown predictor: " + o.predictor);
    }

    auto run = pipeline::evaluate(samplegen::load_tasks(source_dir(o)), factory, config);
    if (!o.out.empty()) {
        std::string lines;
        for (const auto& r : run.results)
            lines += pipeline::to_jsonl_line(r) + "\n";
        write_output(o.out, lines, out);
    }
    write_output(o.report, pipeline::to_json(run, config.driver), out);
    return !run.task_errors.empty() && o.strict ? 1 : 0;
}

int cmd_apply(const Options& o, std::ostream& out)
{
    if (o.root.empty() || !fs::is_directory(o.root))
        throw ConfigError("apply needs an existing --root directory");
    auto script = editfmt::parse_edits(read_text(o.edits, "--edits"));
    editfmt::FileMap before;
    for (const auto& e : script.edits) {
        auto file = fs::path(o.root) / e.path;
        if (fs::is_regular_file(file))
            before.emplace(e.path, ingest::read_file(file));
    }
    editfmt::FileMap after;
    try {
        after = editfmt::apply_edits(before, script);
    } catch (const editfmt::EditError& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    if (o.emit_diff) {
        out << editfmt::to_unified_diff(before, after);
        return 0;
    }
    for (const auto& [path, content] : after) {
        if (before.at(path) != content)
            ingest::write_atomic(fs::path(o.root) / path, content);
    }
    return 0;
}

int cmd_retrieve(const Options& o, std::ostream& out)
{
    if (o.root.empty() || !fs::is_directory(o.root))
        throw ConfigError("retrieve needs an existing --root directory");
    std::string query = o.query;
    if (!o.query_file.empty())
        query = read_text(o.query_file, "--query-file");
    if (query.empty())
        throw ConfigError("retrieve needs --query or --query-file");
    auto tree = repostruct::build_tree(o.root, ExclusionRules::defaults());
    std::map<std::string, std::string> docs;
    for (const auto& p : tree.file_paths())
        docs.emplace(p, ingest::read_file(fs::path(o.root) / p));
    if (docs.empty())
        throw ConfigError("no analyzable files under " + o.root);
    retrieval::Bm25Index index(docs, {o.k1, o.b});
    std::size_t rank = 0;
    for (const auto& d : index.query_top_k(query, o.top_k)) {
        char score[64];
        std::snprintf(score, sizeof score, "%.6f", d.score);
        out << ++rank << '\t' << score << '\t' << d.path << '\n';
    }
    return 0;
}

int cmd_stats(const Options& o, std::ostream& out)
{
    if (o.in.empty())
        throw ConfigError("stats needs --in");
    auto samples = samplegen::read_jsonl(o.in);
    static constexpr std::size_t kBuckets[] = {256, 512, 1024, 2048, 4096, 8192, 16384, 32768};
    struct KindStats {
        std::size_t count = 0, min = 0, max = 0, total = 0;
        std::map<std::string, std::size_t> histogram;
    };
    std::map<std::string, KindStats> per_kind;
    for (auto k : samplegen::kAllKinds)
        per_kind[std::string(samplegen::to_string(k))];
    for (const auto& s : samples) {
        auto& st = per_kind[std::string(samplegen::to_string(s.kind))];
        auto n = s.meta.token_count;
        st.min = st.count == 0 ? n : std::min(st.min, n);
        st.max = std::max(st.max, n);
        st.total += n;
        ++st.count;
        std::string bucket = ">32768";
        for (auto limit : kBuckets) {
            if (n <= limit) {
                bucket = "<=" + std::to_string(limit);
                break;
            }
        }
        ++st.histogram[bucket];
    }
    nlohmann::ordered_json j;
    j["samples"] = samples.size();
    nlohmann::ordered_json kinds;
    for (auto k : samplegen::kAllKinds) {
        const auto& st = per_kind[std::string(samplegen::to_string(k))];
        nlohmann::ordered_json row;
        row["count"] = st.count;
        row["min_tokens"] = st.min;
        row["max_tokens"] = st.max;
        row["mean_tokens"] = st.count ? static_cast<double>(st.total) / static_cast<double>(st.count) : 0.0;
        nlohmann::ordered_json hist = nlohmann::ordered_json::object();
        for (auto limit : kBuckets) {
            auto key = "<=" + std::to_string(limit);
            hist[key] = st.histogram.count(key) ? st.histogram.at(key) : 0;
        }
        hist[">32768"] = st.histogram.count(">32768") ? st.histogram.at(">32768") : 0;
        row["histogram"] = hist;
        kinds[std::string(samplegen::to_string(k))] = row;
    }
    j["kinds"] = kinds;
    out << j.dump(2) << "\n";
    return 0;
}

void setup_logging(const std::string& level)
{
    auto logger = spdlog::get("resat");
    if (!logger) {
        logger = spdlog::stderr_color_mt("resat");
        spdlog::set_default_logger(logger);
    }
    auto lvl = spdlog::level::from_str(level);
    if (lvl == spdlog::level::off && level != "off")
        throw ConfigError("unknown log level: " + level);
    spdlog::set_level(lvl);
}

}  // namespace

ChatTemplate chat_template_from_string(std::string_view name)
{
    if (name == "none")
        return ChatTemplate::None;
    if (name == "chatml")
        return ChatTemplate::ChatML;
    if (name == "alpaca")
        return ChatTemplate::Alpaca;
    throw ConfigError("unknown chat template: " + std::string(name));
}

std::pair<std::string, std::string> apply_chat_template(ChatTemplate tmpl, std::string_view input,
                                                        std::string_view output)
{
    switch (tmpl) {
    case ChatTemplate::None:
        break;
    case ChatTemplate::ChatML:
        return {"<|im_start|>system\nYou are a helpful assistant.<|im_end|>\n<|im_start|>user\n" + std::string(input)
                    + "<|im_end|>\n<|im_start|>assistant\n",
                std::string(output) + "<|im_end|>\n"};
    case ChatTemplate::Alpaca:
        return {"Below is an instruction that describes a task. Write a response that appropriately completes the "
                "request.\n\n### Instruction:\n"
                    + std::string(input) + "\n### Response:\n",
                std::string(output)};
    }
    return {std::string(input), std::string(output)};
}

int run(const std::vector<std::string>& args, std::ostream& out)
{
    Options o;
    CLI::App app{"Build issue-resolution training data from pull requests and evaluate localization and editing.",
                 "resat"};
    app.set_config("--config", "", "Flat key = value file with option defaults; flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--star-min", o.star_min, "Minimum star count")->capture_default_str();
    app.add_option("--pr-min", o.pr_min, "Minimum pull request count")->capture_default_str();
    app.add_option("--token-budget", o.token_budget, "Drop samples longer than this")->capture_default_str();
    app.add_option("--distractors", o.distractors, "Irrelevant functions per LineLoc sample")->capture_default_str();
    app.add_option("--seed", o.seed, "Seed for distractor selection")->capture_default_str();
    app.add_option("--k1", o.k1, "BM25 k1")->capture_default_str();
    app.add_option("--b", o.b, "BM25 b")->capture_default_str();
    app.add_option("--top-k", o.top_k, "Files to retrieve")->capture_default_str();
    app.add_option("--cache", o.cache, "API cache directory")->capture_default_str();
    app.add_option("--fixtures", o.fixtures, "Read tasks from this cache-layout directory instead of --cache");
    app.add_option("--out", o.out, "Output file");
    app.add_option("--report", o.report, "Report file (build: next to --out; eval: standard output)");
    app.add_flag("--offline", o.offline, "Never touch the network; cache misses are errors");
    app.add_flag("--strict", o.strict, "Exit with status 1 when any task fails");
    app.add_option("--workers", o.workers, "Worker threads (0: logical CPU count)")->capture_default_str();
    app.add_option("--chat-template", o.chat_template, "none, chatml or alpaca")->capture_default_str();
    app.add_option("--log-level", o.log_level, "trace, debug, info, warn, error or off")->capture_default_str();

    app.add_option("--candidates", o.candidates, "Candidate CSV (rank,package,owner,name)");
    app.add_option("--denylist", o.denylist, "owner/name per line to exclude");
    app.add_option("--repos", o.repos, "Repository CSV written by select");
    app.add_option("--clones", o.clones, "Directory of local clones named <owner>__<name>");
    app.add_option("--api-url", o.api_url, "API base URL");

    app.add_option("--driver", o.driver, "agentless or rag-swe")->capture_default_str();
    app.add_option("--predictor", o.predictor, "oracle, stub or http")->capture_default_str();
    app.add_option("--endpoint", o.endpoint, "Predictor URL for --predictor http");
    app.add_option("--stub-text", o.stub_text, "Response of the stub predictor");
    app.add_option("--predictor-timeout-ms", o.predictor_timeout_ms)->capture_default_str();
    app.add_option("--predictor-retries", o.predictor_retries)->capture_default_str();

    app.add_option("--edits", o.edits, "Search/replace edit script");
    app.add_option("--root", o.root, "Directory the command operates on");
    app.add_flag("--emit-diff", o.emit_diff, "Print a unified diff instead of writing files");

    app.add_option("--query", o.query, "Retrieval query text");
    app.add_option("--query-file", o.query_file, "File holding the retrieval query");

    app.add_option("--in", o.in, "Dataset JSONL");

    auto* select = app.add_subcommand("select", "Filter candidate repositories into a repository CSV");
    auto* scrape = app.add_subcommand("scrape", "Fetch pull requests and issues of selected repositories");
    auto* build = app.add_subcommand("build", "Build the training JSONL and run report");
    auto* eval = app.add_subcommand("eval", "Run an evaluation driver and report hit rates");
    auto* apply = app.add_subcommand("apply", "Apply a search/replace script to a directory");
    auto* retrieve = app.add_subcommand("retrieve", "BM25 top-k files for a query");
    auto* stats = app.add_subcommand("stats", "Kind and length statistics of a dataset");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, std::cerr);
        return code == 0 ? 0 : 2;
    }

    try {
        setup_logging(o.log_level);
        validate(o);
        if (select->parsed())
            return cmd_select(o, out);
        if (scrape->parsed())
            return cmd_scrape(o, out);
        if (build->parsed())
            return cmd_build(o, out);
        if (eval->parsed())
            return cmd_eval(o, out);
        if (apply->parsed())
            return cmd_apply(o, out);
        if (retrieve->parsed())
            return cmd_retrieve(o, out);
        if (stats->parsed())
            return cmd_stats(o, out);
    } catch (const ConfigError& e) {
        std::cerr << "resat: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "resat: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "resat: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace resat::cli
