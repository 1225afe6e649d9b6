#include "homgibbs/mcmc.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace homgibbs;

TEST_CASE("occupied defaults")
{
    CHECK(default_occupied(hard_core()) == 0b01);
    CHECK(default_occupied(hinge()) == 0b101);
    CHECK(default_occupied(complete_graph(3)) == 0b111);
}

TEST_CASE("initial states")
{
    const auto g = grid_box(3, 2);
    const auto h = hard_core();
    const auto even = sublattice_init(g, h, 0);
    CHECK(is_homomorphism(g, h, even));
    for (Site s = 0; s < g.size(); ++s)
        CHECK((even[s] == 0) == (site_parity(g, s) == 0));
    CHECK(constant_init(g, h, 1) == HomMap(g.size(), 1));
    CHECK_THROWS_AS(constant_init(g, h, 0), std::invalid_argument);
    const auto rnd = random_greedy_init(g, hinge(), std::vector<double>{1, 1, 1}, Rng(3));
    CHECK(is_homomorphism(g, hinge(), rnd));
    CHECK_THROWS(random_greedy_init(complete_board(4), complete_graph(3), std::vector<double>{1, 1, 1}, Rng(3)));
}

TEST_CASE("chain stays valid and respects pins")
{
    const auto g = grid_box(4, 2);
    const auto h = hinge();
    PartialMap pins(g.size());
    for (auto s : grid_boundary(g))
        pins[s] = 0;
    const std::vector<double> lam{2, 1, 2};
    Chain chain(g, h, lam, constant_init(g, h, 0), Rng(7), pins);
    CHECK(chain.free_sites() == 49);
    for (int k = 0; k < 200; ++k)
        chain.sweep();
    CHECK(chain.valid());
    CHECK(chain.steps() == 200 * 49);
    for (auto s : grid_boundary(g))
        CHECK(chain.state()[s] == 0);
    CHECK_THROWS_AS(Chain(g, h, lam, HomMap(g.size(), 1), Rng(7), pins), std::invalid_argument);
}

TEST_CASE("runs are reproducible")
{
    const auto g = grid_box(3, 2);
    const auto h = hard_core();
    const std::vector<double> lam{1.5, 1};
    RunOptions opts;
    opts.sweeps = 50;
    const auto a = run(g, h, lam, sublattice_init(g, h, 0), Rng(1, 2), opts);
    const auto b = run(g, h, lam, sublattice_init(g, h, 0), Rng(1, 2), opts);
    CHECK(a.final_state == b.final_state);
    CHECK(a.occupied.size() == 51);
    CHECK(a.has_parity);
    CHECK(a.color_counts.size() == 51 * 2);
    const auto rho = parity_series(a);
    CHECK(rho.front() == 1.0);
    const auto j = to_json(a);
    CHECK(j.contains("tau_rho"));
    CHECK(to_csv(a).rfind("sweep,", 0) == 0);
}

TEST_CASE("autocorrelation of white noise is near one")
{
    Rng rng(5);
    std::vector<double> x(20000);
    for (auto& v : x)
        v = rng.uniform();
    CHECK(integrated_autocorrelation(x) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("small bimodality run")
{
    BimodalityOptions opts;
    opts.sweeps = 200;
    opts.replicas = 8;
    const auto rep = bimodality(grid_box(4, 2), hard_core(), std::vector<double>{5.0, 1.0}, opts);
    CHECK(rep.final_rho.size() == 8);
    CHECK(rep.mean_rho_even_start > rep.mean_rho_odd_start);
    CHECK_THROWS_AS(bimodality(complete_board(3), hard_core(), std::vector<double>{1, 1}, opts),
                    std::invalid_argument);
}

TEST_CASE("pins json")
{
    const auto pins = pins_from_json(nlohmann::json::parse(R"({"pins":[[0,1],[3,0]]})"), 4, 2);
    CHECK(pins[0] == 1u);
    CHECK_FALSE(pins[1].has_value());
    CHECK(to_json(pins)["pins"].size() == 2);
    CHECK_THROWS(pins_from_json(nlohmann::json::parse(R"({"pins":[[9,1]]})"), 4, 2));
    CHECK_THROWS(pins_from_json(nlohmann::json::parse(R"({"pins":[[0,5]]})"), 4, 2));
}

TEST_CASE("render writes a ppm")
{
    const auto g = grid_box(2, 2);
    const auto path = std::filesystem::temp_directory_path() / "homgibbs_render_test.ppm";
    render(g, hard_core(), sublattice_init(g, hard_core(), 0), path);
    std::ifstream in(path, std::ios::binary);
    std::string magic;
    in >> magic;
    CHECK(magic == "P6");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(render(tree_board(2, 2), hard_core(), HomMap(10, 1), path), std::invalid_argument);
}
