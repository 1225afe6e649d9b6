#include "homgibbs/classify.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace homgibbs;

TEST_CASE("hinge dismantles and the cop wins")
{
    const auto h = hinge();
    const auto seq = dismantle(h);
    REQUIRE(seq);
    CHECK(seq->steps.size() == 2);
    CHECK(replay_folds(h, *seq) == seq->survivor);
    CHECK(cop_win(h));
    CHECK(fertility(h).fertile);
}

TEST_CASE("hard-core")
{
    const auto h = hard_core();
    CHECK(is_dismantlable(h));
    CHECK(cop_win(h));
    // The vacant node sees everything and an edge is complete bipartite.
    CHECK_FALSE(fertility(h).fertile);
}

TEST_CASE("complete graphs are sterile and not dismantlable")
{
    for (std::size_t q = 2; q <= 5; ++q) {
        const auto h = complete_graph(q);
        CHECK_FALSE(is_dismantlable(h));
        CHECK_FALSE(cop_win(h));
        CHECK_FALSE(fertility(h).fertile);
    }
    CHECK(fertility(single_looped_node()).fertile == false);
}

TEST_CASE("looped cycles")
{
    CHECK(is_dismantlable(cycle_graph(3, true)));
    CHECK_FALSE(is_dismantlable(cycle_graph(4, true)));
    CHECK_FALSE(cop_win(cycle_graph(5, true)));
    CHECK(is_dismantlable(path_graph(4, true)));
}

TEST_CASE("fold witnesses are folds")
{
    for (const auto& h : enumerate_connected_graphs(4)) {
        const auto f = find_fold(h);
        if (!f)
            continue;
        CHECK(f->folded != f->absorber);
        CHECK((h.row(f->folded) & ~h.row(f->absorber)) == 0);
    }
}

TEST_CASE("classification agrees with the oracles")
{
    std::size_t sterile = 0;
    for (const auto& h : enumerate_connected_graphs(4)) {
        const auto a = oracle::adjacency(h);
        CHECK(is_dismantlable(h) == oracle::dismantlable(a));
        CHECK(cop_win(h) == oracle::cop_wins(a));
        const auto rep = fertility(h);
        CHECK(!rep.fertile == oracle::sterile(a));
        sterile += rep.fertile ? 0 : 1;
        if (rep.fertile)
            CHECK((rep.unreached_by_loop || rep.non_multipartite));
    }
    CHECK(sterile == 21);
}

TEST_CASE("replay rejects a bad sequence")
{
    FoldSequence bad;
    bad.steps.push_back({0, 2});
    bad.survivor = 1;
    CHECK_THROWS_AS(replay_folds(hinge(), bad), std::invalid_argument);
}

TEST_CASE("classification json")
{
    const auto j = to_json(classify(hinge()), hinge());
    CHECK(j.contains("dismantlable"));
    CHECK(j["cop_win"] == true);
}
