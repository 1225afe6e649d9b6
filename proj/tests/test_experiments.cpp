#include "homgibbs/experiments.hpp"

#include <doctest.h>

using namespace homgibbs;

TEST_CASE("experiment registry")
{
    CHECK(experiment_ids().size() == 14);
    CHECK_THROWS_AS(run_experiment({"no-such-id"}), std::invalid_argument);
}

TEST_CASE("quick experiments pass")
{
    for (const char* id : {"hinge-activities", "conditional-symmetry", "stationary-fractions", "frozen-rigidity",
                           "scaling-gauge", "detailed-balance", "weak-square-isolation"}) {
        CAPTURE(id);
        ExperimentConfig cfg;
        cfg.id = id;
        const auto res = run_experiment(cfg);
        CHECK(res.passed);
        CHECK(res.diff.empty());
        CHECK(to_json(res)["id"] == id);
    }
}

TEST_CASE("random generators")
{
    Rng rng(9);
    for (int k = 0; k < 20; ++k) {
        const auto h = random_connected_graph(5, 0.4, rng);
        CHECK(is_connected(h));
        for (auto l : random_activities(5, rng))
            CHECK((l >= 0.1 && l <= 10.0));
    }
}
