#include <resat/pipeline/drivers.hpp>

#include <resat/core/parallel.hpp>
#include <resat/core/text.hpp>
#include <resat/samplegen/templates.hpp>
#include <resat/skeleton/skeleton.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>

namespace resat::pipeline {

using samplegen::PreparedTask;

namespace {

void check_edit(const PreparedTask& task, const editfmt::FileMap& scope, const editfmt::EditScript& script,
                TaskResult& result)
{
    editfmt::FileMap patched;
    try {
        patched = editfmt::apply_edits(scope, script);
    } catch (const editfmt::EditError& e) {
        result.edit.error = e.what();
        return;
    }
    result.edit.applied = true;
    bool ok = true;
    for (const auto& [path, _] : task.before)
        if (!patched.count(path))
            ok = false;
    for (const auto& [path, content] : patched) {
        auto post = task.after.find(path);
        const auto& expected = post != task.after.end() ? post->second : task.pre_files.at(path);
        if (content != expected)
            ok = false;
    }
    result.edit.matches_gold = ok;
}

void run_edit_stage(const PreparedTask& task, Predictor& predictor, const std::string& prompt,
                    const editfmt::FileMap& scope, TaskResult& result)
{
    auto text = predictor.predict(SampleKind::CodeEdit, prompt);
    try {
        result.script = editfmt::parse_edits(text);
    } catch (const editfmt::MalformedEdit& e) {
        result.failures.push_back({"edit", e.what()});
        result.edit.error = e.what();
        return;
    }
    if (result.script->edits.empty()) {
        result.failures.push_back({"edit", "no edit blocks in response"});
        result.edit.error = "no edit blocks in response";
        return;
    }
    check_edit(task, scope, *result.script, result);
}

editfmt::FileMap subset(const editfmt::FileMap& files, const std::set<std::string>& keep)
{
    editfmt::FileMap out;
    for (const auto& p : keep)
        if (auto it = files.find(p); it != files.end())
            out.emplace(p, it->second);
    return out;
}

}  // namespace

std::string_view to_string(Driver d)
{
    return d == Driver::Agentless ? "agentless" : "rag-swe";
}

Driver driver_from_string(std::string_view name)
{
    if (name == "agentless")
        return Driver::Agentless;
    if (name == "rag-swe")
        return Driver::RagSwe;
    throw std::invalid_argument("unknown driver: " + std::string(name));
}

TaskResult run_agentless(const PreparedTask& task, Predictor& predictor)
{
    TaskResult result;
    result.task_id = task.task.task_id();
    const auto& problem = task.task.problem_statement;

    // Stage 1: files.
    auto text = predictor.predict(SampleKind::FileLoc, samplegen::file_loc_prompt(problem, task.tree_rendering));
    for (const auto& path : samplegen::parse_file_answer(text)) {
        if (task.pre_files.count(path))
            result.predictions.files.insert(path);
        else
            spdlog::warn("{}: predicted file {} is not in the repository", result.task_id, path);
    }
    if (result.predictions.files.empty())
        result.failures.push_back({"file", "no known file paths in response"});

    // Stage 2: functions, over the predicted files' skeletons. Later stages
    // see only what earlier stages predicted, but their own answers are kept
    // whenever they name a file of the repository.
    std::map<std::string, std::optional<skeleton::FileSkeleton>> skeletons;
    auto skeleton_of = [&](const std::string& path) -> const skeleton::FileSkeleton* {
        auto [it, inserted] = skeletons.try_emplace(path);
        if (inserted) {
            try {
                it->second = skeleton::parse_file(path, task.pre_files.at(path));
            } catch (const skeleton::SyntaxError& e) {
                spdlog::warn("{}: {}", result.task_id, e.what());
            }
        }
        return it->second ? &*it->second : nullptr;
    };
    std::string rendered;
    for (const auto& path : result.predictions.files)
        if (const auto* sk = skeleton_of(path))
            rendered += skeleton::render_skeleton(*sk);
    text = predictor.predict(SampleKind::FuncLoc, samplegen::func_loc_prompt(problem, rendered));
    for (const auto& ref : samplegen::parse_function_answer(text))
        if (task.pre_files.count(ref.first))
            result.predictions.functions.insert(ref);
    if (result.predictions.functions.empty())
        result.failures.push_back({"function", "no known functions in response"});

    // Stage 3: lines, over the predicted functions' numbered bodies.
    samplegen::RegionMap regions;
    for (const auto& [path, name] : result.predictions.functions) {
        const auto* sk = skeleton_of(path);
        if (!sk)
            continue;
        if (name == skeleton::kModuleLevel) {
            regions[path].push_back({1, sk->line_count});
        } else if (const auto* d = skeleton::find_by_name(*sk, name)) {
            regions[path].push_back({d->start_line, d->end_line});
        }
    }
    text = predictor.predict(SampleKind::LineLoc,
                             samplegen::line_loc_prompt(problem, samplegen::render_numbered(task.pre_files, regions)));
    auto [line_funcs, lines] = samplegen::parse_line_answer(text);
    for (const auto& l : lines)
        if (task.pre_files.count(l.first))
            result.predictions.lines.insert(l);
    if (result.predictions.lines.empty())
        result.failures.push_back({"line", "no line numbers in response"});

    // Stage 4: edits, over the functions named by stage 3 plus windows around
    // the predicted lines.
    samplegen::RegionMap edit_regions;
    for (const auto& [path, name] : line_funcs) {
        if (!task.pre_files.count(path) || name == skeleton::kModuleLevel)
            continue;
        const auto* sk = skeleton_of(path);
        if (!sk)
            continue;
        if (const auto* d = skeleton::find_by_name(*sk, name))
            edit_regions[path].push_back({d->start_line, d->end_line});
    }
    for (const auto& [path, line] : result.predictions.lines)
        edit_regions[path].push_back({line - 3, line + 3});
    run_edit_stage(task, predictor,
                   samplegen::code_edit_prompt(problem, samplegen::render_numbered(task.pre_files, edit_regions)),
                   task.pre_files, result);

    result.hits = metrics::score_instance(task.gold, result.predictions);
    return result;
}

TaskResult run_rag_swe(const PreparedTask& task, Predictor& predictor, const RagOptions& options)
{
    TaskResult result;
    result.task_id = task.task.task_id();
    samplegen::RegionMap whole;
    if (!task.pre_files.empty()) {
        retrieval::Bm25Index index(task.pre_files, options.params);
        for (const auto& doc : index.query_top_k(task.task.problem_statement, options.top_k)) {
            result.predictions.files.insert(doc.path);
            whole[doc.path].push_back({1, static_cast<int>(text::split_lines(task.pre_files.at(doc.path)).size())});
        }
    }
    if (result.predictions.files.empty())
        result.failures.push_back({"file", "retrieval returned no files"});

    run_edit_stage(task, predictor,
                   samplegen::code_edit_prompt(task.task.problem_statement,
                                               samplegen::render_numbered(task.pre_files, whole)),
                   subset(task.pre_files, result.predictions.files), result);

    result.hits = metrics::score_instance(task.gold, result.predictions, metrics::Levels{true, false, false});
    return result;
}

namespace {

nlohmann::ordered_json level_json(const metrics::LevelScore& s)
{
    if (!s.scored())
        return nullptr;
    nlohmann::ordered_json j;
    j["gold"] = s.gold;
    j["hit"] = s.hit;
    j["recall"] = s.recall();
    j["full_hit"] = s.full_hit();
    return j;
}

nlohmann::ordered_json aggregate_json(const metrics::LevelAggregate& a)
{
    if (a.instances == 0)
        return nullptr;
    nlohmann::ordered_json j;
    j["instances"] = a.instances;
    j["full_hits"] = a.full_hits;
    j["gold_items"] = a.gold_items;
    j["hit_items"] = a.hit_items;
    j["instance_pct"] = *a.instance_pct();
    j["micro_pct"] = *a.micro_pct();
    return j;
}

}  // namespace

std::string to_jsonl_line(const TaskResult& r)
{
    nlohmann::ordered_json j;
    j["task_id"] = r.task_id;
    nlohmann::ordered_json pred;
    pred["files"] = r.predictions.files;
    auto funcs = nlohmann::ordered_json::array();
    for (const auto& [p, n] : r.predictions.functions)
        funcs.push_back(p + ": " + n);
    pred["functions"] = funcs;
    auto lines = nlohmann::ordered_json::array();
    for (const auto& [p, l] : r.predictions.lines)
        lines.push_back(nlohmann::ordered_json::array({p, l}));
    pred["lines"] = lines;
    j["predictions"] = pred;
    nlohmann::ordered_json hits;
    hits["file"] = level_json(r.hits.file);
    hits["func"] = level_json(r.hits.func);
    hits["line"] = level_json(r.hits.line);
    j["hits"] = hits;
    nlohmann::ordered_json edit;
    edit["applied"] = r.edit.applied;
    edit["matches_gold"] = r.edit.matches_gold;
    edit["error"] = r.edit.error.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.edit.error);
    j["edit_status"] = edit;
    auto failures = nlohmann::ordered_json::array();
    for (const auto& f : r.failures)
        failures.push_back({{"stage", f.stage}, {"message", f.message}});
    j["stage_failures"] = failures;
    return j.dump();
}

EvalRun evaluate(const std::vector<samplegen::TaskSource>& tasks, const PredictorFactory& factory,
                 const EvalConfig& config)
{
    std::vector<std::optional<TaskResult>> slots(tasks.size());
    std::vector<std::string> skip_reasons(tasks.size());
    std::vector<std::string> errors(tasks.size());
    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        PreparedTask prepared;
        try {
            prepared = samplegen::prepare_task(tasks[i].task, tasks[i].repo_dir, config.rules);
        } catch (const samplegen::TaskError& e) {
            errors[i] = e.what();
            return;
        }
        const auto id = prepared.task.task_id();
        if (prepared.gold.files.empty()) {
            skip_reasons[i] = id + ": no gold files";
            return;
        }
        if (!prepared.gold_complete) {
            skip_reasons[i] = id + ": gold file does not parse";
            return;
        }
        try {
            auto predictor = factory(prepared);
            slots[i] = config.driver == Driver::Agentless ? run_agentless(prepared, *predictor)
                                                          : run_rag_swe(prepared, *predictor, config.rag);
        } catch (const PredictorError& e) {
            errors[i] = id + ": " + e.what();
        }
    });

    EvalRun run;
    std::vector<metrics::InstanceScore> scores;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (!errors[i].empty()) {
            spdlog::error("{}", errors[i]);
            run.task_errors.push_back(errors[i]);
            continue;
        }
        if (!slots[i]) {
            run.skipped.push_back(skip_reasons[i]);
            continue;
        }
        scores.push_back(slots[i]->hits);
        run.edits_applied += slots[i]->edit.applied;
        run.edits_matching_gold += slots[i]->edit.matches_gold;
        run.results.push_back(std::move(*slots[i]));
    }
    if (!scores.empty())
        run.report = metrics::aggregate(scores);
    return run;
}

std::string to_json(const EvalRun& run, Driver driver)
{
    nlohmann::ordered_json j;
    j["driver"] = std::string(to_string(driver));
    j["instance_count"] = run.report.instance_count;
    j["file"] = aggregate_json(run.report.file);
    j["func"] = aggregate_json(run.report.func);
    j["line"] = aggregate_json(run.report.line);
    nlohmann::ordered_json edits;
    edits["applied"] = run.edits_applied;
    edits["matches_gold"] = run.edits_matching_gold;
    edits["applied_pct"] = run.results.empty() ? nlohmann::ordered_json(nullptr)
                                               : nlohmann::ordered_json(100.0 * static_cast<double>(run.edits_applied) /
                                                                        static_cast<double>(run.results.size()));
    j["edits"] = edits;
    j["skipped"] = run.skipped;
    j["task_errors"] = run.task_errors;
    return j.dump(2) + "\n";
}

}  // namespace resat::pipeline
