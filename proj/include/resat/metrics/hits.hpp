#pragma once

#include <resat/diffmap/gold.hpp>

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace resat::metrics {

struct LocPrediction {
    std::set<std::string> files;
    std::set<diffmap::FunctionRef> functions;
    std::set<diffmap::LineRef> lines;
};

/// Recall and full-hit at one granularity. `gold` == 0 means the level is not
/// scored for this instance.
struct LevelScore {
    std::size_t gold = 0;
    std::size_t hit = 0;

    bool scored() const { return gold > 0; }
    double recall() const { return gold == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(gold); }
    bool full_hit() const { return gold > 0 && hit == gold; }
};

struct InstanceScore {
    LevelScore file;
    LevelScore func;
    LevelScore line;
};

struct Levels {
    bool file = true;
    bool func = true;
    bool line = true;
};

/// Recall is |gold ∩ pred| / |gold| per level; extra predictions never hurt.
/// Disabled levels come back unscored.
InstanceScore score_instance(const diffmap::GoldLocalization& gold, const LocPrediction& pred,
                             Levels levels = {});

struct LevelAggregate {
    std::size_t instances = 0;     // instances where the level was scored
    std::size_t full_hits = 0;
    std::size_t gold_items = 0;
    std::size_t hit_items = 0;

    /// Percentage of scored instances with every gold item predicted.
    std::optional<double> instance_pct() const;
    /// Total hit items over total gold items, as a percentage.
    std::optional<double> micro_pct() const;
};

struct HitReport {
    std::size_t instance_count = 0;
    LevelAggregate file;
    LevelAggregate func;
    LevelAggregate line;
};

class EmptyEvaluation : public std::invalid_argument {
public:
    EmptyEvaluation();
};

HitReport aggregate(const std::vector<InstanceScore>& instances);

}  // namespace resat::metrics
