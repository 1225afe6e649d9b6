#include "homgibbs/graph_io.hpp"
#include "homgibbs/graphs.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace homgibbs;

TEST_CASE("standard constraint graphs")
{
    const auto h = hinge();
    CHECK(h.size() == 3);
    CHECK(h.loop_count() == 3);
    CHECK_FALSE(h.adjacent(0, 2));
    CHECK(h.adjacent(0, 1));
    const auto hc = hard_core();
    CHECK_FALSE(hc.looped(0));
    CHECK(hc.looped(1));
    CHECK(complete_graph(4).edges().size() == 6);
    CHECK(make_standard("K_3") == complete_graph(3));
    CHECK(make_standard("cycle:4:looped").loop_count() == 4);
    CHECK_THROWS_AS(make_standard("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(ConstraintGraph(0, {}), std::invalid_argument);
    CHECK_THROWS_AS(ConstraintGraph(65, {}), std::invalid_argument);
}

TEST_CASE("boards")
{
    const auto g = grid_box(2, 2);
    CHECK(g.size() == 25);
    CHECK(g.edges().size() == 40);
    CHECK(is_bipartite(g));
    CHECK(site_parity(g, 0) != site_parity(g, g.neighbors(0)[0]));
    const auto t = tree_board(2, 3);
    CHECK(t.size() == tree_site_count(2, 3));
    CHECK(tree_site_count(2, 3) == 1 + 3 + 6 + 12);
    CHECK(is_tree(t));
    CHECK(t.degree(0) == 3);
    CHECK(make_board("path:4").edges().size() == 3);
    const std::vector<Edge> loop{{1, 1}};
    CHECK_THROWS_AS(Board(2, loop), std::invalid_argument);
}

TEST_CASE("tree boards nest")
{
    const auto small = tree_board(3, 2);
    const auto big = tree_board(3, 4);
    for (const auto& e : small.edges())
        CHECK(big.adjacent(e.a, e.b));
}

TEST_CASE("weak square and double")
{
    const auto h = complete_graph(3);
    const auto sq = weak_square(h);
    CHECK(sq.size() == 9);
    for (const auto& e : sq.edges())
        CHECK((h.adjacent(e.a / 3, e.b / 3) && h.adjacent(e.a % 3, e.b % 3)));
    const auto d = double_graph(complete_graph(2));
    CHECK(d.size() == 4);
    CHECK(components(d).size() == 2);
    CHECK(is_bipartite(d));
    CHECK(components(double_graph(complete_graph(3))).size() == 1);
}

TEST_CASE("canonical form is invariant under relabelling")
{
    const auto h = hinge();
    const std::vector<Node> perm{2, 0, 1};
    CHECK(canonical_form(h) == canonical_form(h.permuted(perm)));
    CHECK(canonical_form(h) != canonical_form(complete_graph(3)));
}

TEST_CASE("corpus sizes")
{
    CHECK(enumerate_connected_graphs(1).size() == 1);
    // One node looped; two nodes: edge with 0, 1 or 2 loops.
    CHECK(enumerate_connected_graphs(2).size() == 4);
    for (const auto& h : enumerate_connected_graphs(4))
        CHECK(oracle::connected(oracle::adjacency(h)));
}

TEST_CASE("json round trip")
{
    const auto h = hinge();
    CHECK(constraint_graph_from_json(to_json(h)) == h);
    const auto g = grid_box(1, 2);
    CHECK(board_from_json(to_json(g)) == g);
    const auto m = nlohmann::json::parse(R"({"type":"constraint","q":2,"adjacency":[[1,1],[1,0]]})");
    CHECK(constraint_graph_from_json(m) == hard_core().permuted(std::vector<Node>{1, 0}));
    const auto bad = nlohmann::json::parse(R"({"type":"constraint","q":2,"adjacency":[[0,1],[0,0]]})");
    CHECK_THROWS(constraint_graph_from_json(bad));
    CHECK(export_dot(h).find("graph") != std::string::npos);
}
