#pragma once

#include <resat/editfmt/search_replace.hpp>
#include <resat/metrics/hits.hpp>
#include <resat/pipeline/predictor.hpp>
#include <resat/retrieval/bm25.hpp>
#include <resat/samplegen/dataset.hpp>

#include <optional>
#include <string>
#include <vector>

namespace resat::pipeline {

enum class Driver { Agentless, RagSwe };
std::string_view to_string(Driver d);
Driver driver_from_string(std::string_view name);

/// A stage whose output could not be used; the run continues with whatever
/// predictions the earlier stages produced.
struct StageParseFailure {
    std::string stage;  // "file", "function", "line", "edit"
    std::string message;
};

struct EditStatus {
    bool applied = false;
    /// Every gold file ends up with its post-merge content and no other file
    /// changed.
    bool matches_gold = false;
    std::string error;
};

struct TaskResult {
    std::string task_id;
    metrics::LocPrediction predictions;
    metrics::InstanceScore hits;
    std::optional<editfmt::EditScript> script;
    EditStatus edit;
    std::vector<StageParseFailure> failures;
};

TaskResult run_agentless(const samplegen::PreparedTask& task, Predictor& predictor);

struct RagOptions {
    std::size_t top_k = 3;
    retrieval::Bm25Params params;
};

/// Retrieves files with BM25 over the task's tree using the problem
/// statement; only the file level is scored.
TaskResult run_rag_swe(const samplegen::PreparedTask& task, Predictor& predictor, const RagOptions& options = {});

/// {"task_id","predictions","hits","edit_status"} on one line.
std::string to_jsonl_line(const TaskResult& result);

struct EvalConfig {
    Driver driver = Driver::Agentless;
    RagOptions rag;
    std::size_t workers = 0;
    ExclusionRules rules = ExclusionRules::defaults();
};

struct EvalRun {
    std::vector<TaskResult> results;  // task order
    metrics::HitReport report;
    std::size_t edits_applied = 0;
    std::size_t edits_matching_gold = 0;
    /// "<task id>: <reason>" for tasks without scorable gold labels.
    std::vector<std::string> skipped;
    /// Tasks that could not be prepared or whose predictor failed.
    std::vector<std::string> task_errors;
};

/// Evaluates every task with non-empty, fully parsed gold labels.
EvalRun evaluate(const std::vector<samplegen::TaskSource>& tasks, const PredictorFactory& factory,
                 const EvalConfig& config = {});

/// HitReport with both aggregation semantics per level; unscored levels are
/// null.
std::string to_json(const EvalRun& run, Driver driver);

}  // namespace resat::pipeline
