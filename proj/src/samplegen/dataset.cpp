#include <resat/samplegen/dataset.hpp>

#include <resat/core/parallel.hpp>
#include <resat/ingest/client.hpp>
#include <resat/ingest/link.hpp>
#include <resat/samplegen/task.hpp>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>

namespace fs = std::filesystem;

namespace resat::samplegen {

std::vector<TaskSource> load_tasks(const fs::path& cache_dir)
{
    std::vector<TaskSource> out;
    for (const auto& dir : ingest::list_cached_repos(cache_dir)) {
        auto cached = ingest::load_cached_repo(dir);
        for (auto& t : ingest::link_tasks(cached.data.prs, cached.data.issues, cached.repo))
            out.push_back({std::move(t), dir});
    }
    std::stable_sort(out.begin(), out.end(), [](const TaskSource& a, const TaskSource& b) {
        return std::pair(a.task.repo.full_name(), a.task.pr.number) < std::pair(b.task.repo.full_name(), b.task.pr.number);
    });
    return out;
}

std::size_t RunReport::dropped(const std::string& reason, SampleKind kind) const
{
    auto r = drops_per_reason.find(reason);
    if (r == drops_per_reason.end())
        return 0;
    auto k = r->second.find(std::string(to_string(kind)));
    return k == r->second.end() ? 0 : k->second;
}

std::string to_json(const RunReport& report)
{
    nlohmann::ordered_json j;
    j["tasks_in"] = report.tasks_in;
    nlohmann::ordered_json per_kind = nlohmann::ordered_json::object();
    for (auto k : kAllKinds) {
        auto it = report.samples_per_kind.find(std::string(to_string(k)));
        per_kind[std::string(to_string(k))] = it == report.samples_per_kind.end() ? 0 : it->second;
    }
    j["samples_per_kind"] = per_kind;
    nlohmann::ordered_json drops = nlohmann::ordered_json::object();
    for (const auto& [reason, kinds] : report.drops_per_reason) {
        nlohmann::ordered_json row = nlohmann::ordered_json::object();
        for (auto k : kAllKinds) {
            auto it = kinds.find(std::string(to_string(k)));
            if (it != kinds.end())
                row[std::string(to_string(k))] = it->second;
        }
        drops[reason] = row;
    }
    j["drops_per_reason"] = drops;
    j["task_errors"] = report.task_errors;
    return j.dump(2) + "\n";
}

namespace {

struct TaskOutcome {
    std::vector<TrainingSample> samples;
    std::vector<std::pair<std::string, SampleKind>> drops;
    std::string error;
};

}  // namespace

Dataset build_dataset(const std::vector<TaskSource>& tasks, const BuildConfig& config)
{
    std::vector<TaskOutcome> outcomes(tasks.size());
    parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
        const auto& src = tasks[i];
        TaskOutcome out;
        PreparedTask prepared;
        try {
            prepared = prepare_task(src.task, src.repo_dir, config.rules);
        } catch (const TaskError& e) {
            spdlog::warn("{}", e.what());
            out.error = e.what();
            for (auto k : kAllKinds)
                out.drops.emplace_back("task_error", k);
            outcomes[i] = std::move(out);
            return;
        }
        auto results = make_samples(prepared, config.sample);
        for (std::size_t k = 0; k < results.size(); ++k) {
            auto& r = results[k];
            if (!r.sample) {
                out.drops.emplace_back(r.skip_reason, kAllKinds[k]);
                continue;
            }
            if (auto reason = token_filter(*r.sample, config.token_budget, config.sample.counter)) {
                out.drops.emplace_back(*reason, r.sample->kind);
                continue;
            }
            out.samples.push_back(std::move(*r.sample));
        }
        outcomes[i] = std::move(out);
    });

    Dataset ds;
    ds.report.tasks_in = tasks.size();
    for (auto k : kAllKinds)
        ds.report.samples_per_kind[std::string(to_string(k))] = 0;
    for (auto& o : outcomes) {
        if (!o.error.empty())
            ds.report.task_errors.push_back(o.error);
        for (const auto& [reason, kind] : o.drops)
            ++ds.report.drops_per_reason[reason][std::string(to_string(kind))];
        for (auto& s : o.samples) {
            ++ds.report.samples_per_kind[std::string(to_string(s.kind))];
            ds.samples.push_back(std::move(s));
        }
    }
    sort_samples(ds.samples);
    return ds;
}

Dataset build_dataset(const fs::path& cache_dir, const BuildConfig& config)
{
    return build_dataset(load_tasks(cache_dir), config);
}

}  // namespace resat::samplegen
