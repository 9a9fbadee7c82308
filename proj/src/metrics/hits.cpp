#include <resat/metrics/hits.hpp>

#include <resat/core/text.hpp>

namespace resat::metrics {

EmptyEvaluation::EmptyEvaluation()
    : std::invalid_argument("cannot aggregate zero instances")
{
}

namespace {

std::set<std::string> normalized(const std::set<std::string>& paths)
{
    std::set<std::string> out;
    for (const auto& p : paths)
        out.insert(text::normalize_path(p));
    return out;
}

template <typename T>
std::set<std::pair<std::string, T>> normalized(const std::set<std::pair<std::string, T>>& refs)
{
    std::set<std::pair<std::string, T>> out;
    for (const auto& [p, v] : refs)
        out.insert({text::normalize_path(p), v});
    return out;
}

template <typename Set>
LevelScore score_level(const Set& gold, const Set& pred)
{
    LevelScore s;
    s.gold = gold.size();
    for (const auto& g : gold)
        s.hit += pred.count(g);
    return s;
}

void accumulate(LevelAggregate& agg, const LevelScore& s)
{
    if (!s.scored())
        return;
    ++agg.instances;
    agg.full_hits += s.full_hit() ? 1 : 0;
    agg.gold_items += s.gold;
    agg.hit_items += s.hit;
}

}  // namespace

InstanceScore score_instance(const diffmap::GoldLocalization& gold, const LocPrediction& pred,
                             Levels levels)
{
    InstanceScore s;
    if (levels.file)
        s.file = score_level(normalized(gold.files), normalized(pred.files));
    if (levels.func)
        s.func = score_level(normalized(gold.functions), normalized(pred.functions));
    if (levels.line)
        s.line = score_level(normalized(gold.lines), normalized(pred.lines));
    return s;
}

std::optional<double> LevelAggregate::instance_pct() const
{
    if (instances == 0)
        return std::nullopt;
    return 100.0 * static_cast<double>(full_hits) / static_cast<double>(instances);
}

std::optional<double> LevelAggregate::micro_pct() const
{
    if (gold_items == 0)
        return std::nullopt;
    return 100.0 * static_cast<double>(hit_items) / static_cast<double>(gold_items);
}

HitReport aggregate(const std::vector<InstanceScore>& instances)
{
    if (instances.empty())
        throw EmptyEvaluation();
    HitReport r;
    r.instance_count = instances.size();
    for (const auto& s : instances) {
        accumulate(r.file, s.file);
        accumulate(r.func, s.func);
        accumulate(r.line, s.line);
    }
    return r;
}

}  // namespace resat::metrics
