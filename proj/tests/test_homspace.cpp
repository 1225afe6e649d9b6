#include "homgibbs/homspace.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numeric>

using namespace homgibbs;

TEST_CASE("enumeration matches brute force")
{
    for (const auto& h : {hinge(), hard_core(), complete_graph(3), cycle_graph(4, true)}) {
        const auto a = oracle::adjacency(h);
        for (const auto& g : {path_board(4), grid_box(1, 2), complete_board(3), tree_board(2, 2)}) {
            if (g.size() > 10)
                continue;
            const auto hs = enumerate(g, h);
            const auto ref = oracle::all_homs(g, a);
            REQUIRE(hs.size() == ref.size());
            for (const auto& f : ref) {
                CHECK(hs.find(std::span<const Node>(f)).has_value());
                CHECK(is_homomorphism(g, h, f));
            }
        }
    }
}

TEST_CASE("flip graph of hard-core on a path is connected")
{
    const auto hs = enumerate(path_board(5), hard_core());
    CHECK(hs.size() == 13);
    const auto c = connectivity(hs);
    CHECK(c.connected);
    CHECK(c.component_count == 1);
    CHECK(isolated_maps(hs).empty());
}

TEST_CASE("proper colourings of a triangle are isolated")
{
    const auto hs = enumerate(complete_board(3), complete_graph(3));
    CHECK(hs.size() == 6);
    CHECK(isolated_maps(hs).size() == 6);
    CHECK(connectivity(hs).component_count == 6);
    CHECK(is_isolated(complete_board(3), complete_graph(3), hs.map_as_vector(0)));
}

TEST_CASE("pins restrict the space")
{
    PartialMap pins(3);
    pins[0] = 0;
    const auto hs = enumerate(path_board(3), hard_core(), {}, pins);
    for (std::size_t k = 0; k < hs.size(); ++k)
        CHECK(hs.spin(k, 0) == 0);
    CHECK(hs.size() == 2);
}

TEST_CASE("caps throw")
{
    EnumerationLimits lim;
    lim.max_maps = 3;
    CHECK_THROWS_AS(enumerate(path_board(6), hard_core(), lim), EnumerationCapExceeded);
}

TEST_CASE("lambda measure is exact and the Gibbs check vanishes")
{
    const auto hs = enumerate(complete_board(2), hard_core());
    const std::vector<Rational> lam{2, 1};
    const auto mu = lambda_measure(hs, std::span<const Rational>(lam));
    CHECK(std::accumulate(mu.begin(), mu.end(), Rational(0)) == 1);
    const auto& f = hs;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const bool vacant = f.spin(k, 0) == 1 && f.spin(k, 1) == 1;
        CHECK(mu[k] == (vacant ? Rational(1, 5) : Rational(2, 5)));
    }
    const std::vector<double> ld{2.0, 1.0};
    const auto md = lambda_measure(hs, std::span<const double>(ld));
    CHECK(check_one_site_gibbs(hs, ld, md).max_violation < 1e-12);
    const auto marg = site_marginal(hs, md, 0);
    CHECK(marg[0] == doctest::Approx(0.4));
    CHECK_THROWS_AS(lambda_measure(hs, std::vector<double>{0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("tree dynamic programming agrees with enumeration")
{
    const auto g = tree_board(2, 3);
    const auto h = hinge();
    const std::vector<double> lam{3.0, 1.0, 0.5};
    PartialMap pins(g.size());
    for (Site s = 0; s < g.size(); ++s)
        if (g.geometry().depth[s] == 3)
            pins[s] = s % 2 ? 0 : 1;
    const auto dp = tree_marginal(g, h, lam, pins, 0);
    const auto en = boundary_influence(g, h, lam, pins, 0, InfluenceMethod::enumeration);
    for (Node i = 0; i < 3; ++i)
        CHECK(dp[i] == doctest::Approx(en[i]).epsilon(1e-12));
    const auto hs = enumerate(g, h, {}, pins);
    CHECK(tree_extension_count(g, h, pins) == hs.size());
    CHECK(tree_feasible_spins(g, h, pins, 0) == 0b111);
}

TEST_CASE("mixing distance")
{
    const auto free = enumerate(path_board(5), single_looped_node());
    CHECK(empirical_mixing_distance(free).m == 1u);
    const auto rigid = enumerate(path_board(4), complete_graph(2));
    const auto rep = empirical_mixing_distance(rigid);
    CHECK(rep.diameter == 3);
    CHECK_FALSE(rep.m.has_value());
}
