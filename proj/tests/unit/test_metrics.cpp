#include <doctest.h>

#include <resat/metrics/hits.hpp>

using namespace resat::metrics;
using resat::diffmap::GoldLocalization;

namespace {

GoldLocalization sample_gold()
{
    return {{"a.py", "b.py"}, {{"a.py", "f"}, {"b.py", "<module-level>"}}, {{"a.py", 3}, {"b.py", 1}}};
}

}  // namespace

TEST_CASE("score_instance")
{
    auto gold = sample_gold();
    auto perfect = score_instance(gold, {gold.files, gold.functions, gold.lines});
    CHECK(perfect.file.full_hit());
    CHECK(perfect.func.full_hit());
    CHECK(perfect.line.recall() == 1.0);

    auto none = score_instance(gold, {});
    CHECK(none.file.recall() == 0.0);
    CHECK(none.func.recall() == 0.0);
    CHECK(none.line.recall() == 0.0);
    CHECK_FALSE(none.line.full_hit());

    auto half = score_instance(gold, {{"a.py", "c.py"}, {}, {}});
    CHECK(half.file.recall() == 0.5);
    CHECK_FALSE(half.file.full_hit());

    auto file_only = score_instance(gold, {gold.files, {}, {}}, {true, false, false});
    CHECK(file_only.file.full_hit());
    CHECK_FALSE(file_only.func.scored());
    CHECK_FALSE(file_only.line.scored());
}

TEST_CASE("extra predictions do not change recall")
{
    auto gold = sample_gold();
    LocPrediction p{{"a.py"}, {{"a.py", "f"}}, {{"a.py", 3}}};
    auto base = score_instance(gold, p);
    p.files.insert("z.py");
    p.functions.insert({"a.py", "g"});
    p.lines.insert({"a.py", 99});
    auto more = score_instance(gold, p);
    CHECK(more.file.hit == base.file.hit);
    CHECK(more.func.hit == base.func.hit);
    CHECK(more.line.hit == base.line.hit);
}

TEST_CASE("aggregate")
{
    InstanceScore a, b;
    a.file = {2, 2};
    b.file = {2, 1};
    auto r = aggregate({a, b});
    CHECK(r.instance_count == 2);
    CHECK(*r.file.instance_pct() == doctest::Approx(50.0));
    CHECK(*r.file.micro_pct() == doctest::Approx(75.0));
    CHECK_FALSE(r.func.instance_pct().has_value());
    CHECK_FALSE(r.line.micro_pct().has_value());

    auto reversed = aggregate({b, a});
    CHECK(*reversed.file.instance_pct() == *r.file.instance_pct());
    CHECK(*reversed.file.micro_pct() == *r.file.micro_pct());

    auto single = aggregate({score_instance(sample_gold(), {sample_gold().files, {}, {}})});
    CHECK(*single.file.instance_pct() == 100.0);
    CHECK(*single.file.micro_pct() == 100.0);

    CHECK_THROWS_AS(aggregate({}), EmptyEvaluation);
}
