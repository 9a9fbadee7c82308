#pragma once

#include <resat/core/exclusion.hpp>
#include <resat/ingest/types.hpp>
#include <resat/samplegen/samples.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace resat::samplegen {

/// A linked task and the cache directory of its repository.
struct TaskSource {
    ingest::LinkedTask task;
    std::filesystem::path repo_dir;
};

/// Links the PRs and issues of every cached repository. Sorted by
/// (repo full name, PR number).
std::vector<TaskSource> load_tasks(const std::filesystem::path& cache_dir);

struct BuildConfig {
    SampleOptions sample;
    std::size_t token_budget = 32768;
    std::size_t workers = 0;  // 0: logical CPU count
    ExclusionRules rules = ExclusionRules::defaults();
};

struct RunReport {
    std::size_t tasks_in = 0;
    std::map<std::string, std::size_t> samples_per_kind;
    /// reason -> kind -> count
    std::map<std::string, std::map<std::string, std::size_t>> drops_per_reason;
    /// "<task id>: <message>" for tasks that could not be prepared.
    std::vector<std::string> task_errors;

    std::size_t dropped(const std::string& reason, SampleKind kind) const;
};

std::string to_json(const RunReport& report);

struct Dataset {
    std::vector<TrainingSample> samples;  // sorted
    RunReport report;
};

Dataset build_dataset(const std::vector<TaskSource>& tasks, const BuildConfig& config = {});
Dataset build_dataset(const std::filesystem::path& cache_dir, const BuildConfig& config = {});

}  // namespace resat::samplegen
