#include "homgibbs/experiments.hpp"

#include "homgibbs/classify.hpp"
#include "homgibbs/homspace.hpp"
#include "homgibbs/mcmc.hpp"
#include "homgibbs/rational.hpp"
#include "homgibbs/treegibbs.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace homgibbs {

namespace {

struct Ctx {
    ExperimentResult& result;
    const ExperimentConfig& config;

    void expect(bool ok, const std::string& what)
    {
        if (!ok)
            result.diff.push_back(what);
    }
    void write(const std::string& name, const std::string& content) const
    {
        if (config.out_dir.empty())
            return;
        std::ofstream out(config.out_dir / name, std::ios::binary);
        out << content;
        if (!out)
            throw std::runtime_error("cannot write " + (config.out_dir / name).string());
    }
};

std::string fmt(double x, int digits = 6)
{
    std::ostringstream out;
    out.precision(digits);
    out << x;
    return out.str();
}

std::string join(const std::vector<BigInt>& xs)
{
    std::string s;
    for (std::size_t k = 0; k < xs.size(); ++k)
        s += (k ? "," : "") + xs[k].str();
    return s;
}

double max_rel_profile_gap(std::span<const double> w, std::span<const double> target)
{
    double gap = 0;
    for (std::size_t i = 0; i < w.size(); ++i)
        gap = std::max(gap, std::abs(w[i] / w[0] * target[0] / target[i] - 1.0));
    return gap;
}

std::vector<Rational> rationals(std::initializer_list<int> xs)
{
    std::vector<Rational> out;
    for (auto x : xs)
        out.emplace_back(x);
    return out;
}

// ---------------------------------------------------------------- bundles

void hinge_activities(Ctx& c)
{
    const auto h = hinge();
    const auto a = to_coprime_integers(weights_to_activities(h, 2, rationals({4, 2, 1})));
    const auto b = to_coprime_integers(weights_to_activities(h, 2, rationals({1, 2, 4})));
    const std::vector<BigInt> expected{49, 18, 49};
    c.expect(a == expected, "w=(4,2,1): expected 49,18,49, got " + join(a));
    c.expect(b == expected, "w=(1,2,4): expected 49,18,49, got " + join(b));
    c.result.summary = "lambda(4,2,1) = " + join(a) + ", lambda(1,2,4) = " + join(b);
    c.result.details = {{"forward", join(a)}, {"reversed", join(b)}};
}

void hinge_multiplicity(Ctx& c)
{
    const auto h = hinge();
    SolveOptions opts;
    opts.invariant_only = true;
    opts.threads = c.config.threads;
    const std::vector<double> lambda{49, 18, 49};
    const auto res = solve_fundamental(h, 2, lambda, opts);
    const std::vector<double> fwd{4, 2, 1}, rev{1, 2, 4};
    bool has_fwd = false, has_rev = false, has_sym = false;
    std::vector<double> sym;
    for (const auto& s : res.solutions) {
        if (!s.invariant)
            continue;
        has_fwd = has_fwd || max_rel_profile_gap(s.u, fwd) < 1e-8;
        has_rev = has_rev || max_rel_profile_gap(s.u, rev) < 1e-8;
        if (std::abs(s.u[0] - s.u[2]) < 1e-8 * s.u[0]) {
            has_sym = true;
            sym = {6.0, 6.0 * s.u[1] / s.u[0], 6.0};
        }
    }
    c.expect(res.invariant_count() >= 3, "expected >= 3 invariant solutions, got " + std::to_string(res.invariant_count()));
    c.expect(has_fwd, "no solution proportional to (4,2,1)");
    c.expect(has_rev, "no solution proportional to (1,2,4)");
    c.expect(has_sym, "no symmetric solution");
    c.result.summary = std::to_string(res.invariant_count()) + " invariant solutions" +
                       (has_sym ? "; symmetric weighting (6, " + fmt(sym[1]) + ", 6)" : "");
    c.result.details = to_json(res);
}

void conditional_symmetry(Ctx& c)
{
    const auto h = hinge();
    const Node yellow = 1;
    const std::vector<Node> context{yellow, yellow, yellow};
    const auto law = conditional_spin_check(h, 2, rationals({4, 2, 1}), context);
    const auto walk = exact_walk(h, rationals({4, 2, 1}));
    const Rational green = walk.transition(h, 1, 0) * pow(walk.transition(h, 0, 1), 2);
    const Rational red = walk.transition(h, 1, 2) * pow(walk.transition(h, 2, 1), 2);
    c.expect(green == Rational(4, 63), "P(yellow->green) (1/3)^2 expected 4/63, got " + green.str());
    c.expect(red == Rational(4, 63), "P(yellow->red) (2/3)^2 expected 4/63, got " + red.str());
    c.expect(law.walk[0] == law.walk[2], "conditional green " + law.walk[0].str() + " != red " + law.walk[2].str());
    c.expect(law.walk == law.gibbs, "walk conditional differs from the activity conditional");
    c.result.summary = "4/7*(1/3)^2 = " + green.str() + ", 1/7*(2/3)^2 = " + red.str() + ", P(green) = P(red) = " +
                       law.walk[0].str();
    c.result.details = {{"green_path", green.str()}, {"red_path", red.str()}, {"p_green", law.walk[0].str()},
                        {"p_red", law.walk[2].str()}, {"p_yellow", law.walk[1].str()}};
}

void stationary_fractions(Ctx& c)
{
    const auto h = hinge();
    SolveOptions opts;
    opts.invariant_only = true;
    opts.threads = c.config.threads;
    const std::vector<double> lambda{49, 18, 49};
    const auto res = solve_fundamental(h, 2, lambda, opts);
    std::vector<double> sym;
    for (const auto& s : res.solutions)
        if (s.invariant && std::abs(s.u[0] - s.u[2]) < 1e-8 * s.u[0])
            sym = s.u;
    c.expect(!sym.empty(), "solver found no symmetric weighting");
    if (sym.empty())
        return;
    const std::vector<std::vector<double>> weightings{{4, 2, 1}, sym, {1, 2, 4}};
    const std::vector<double> expected{0.59, 0.30, 0.07};
    nlohmann::json pis = nlohmann::json::array();
    std::string summary = "P(green):";
    for (std::size_t k = 0; k < 3; ++k) {
        const BranchingWalk walk(h, 2, weightings[k]);
        const double pg = walk.stationary()[0];
        pis.push_back(walk.stationary());
        summary += " " + fmt(pg, 4);
        c.expect(std::abs(pg - expected[k]) <= 0.02,
                 "weighting " + std::to_string(k) + ": P(green) " + fmt(pg) + " not within 0.02 of " + fmt(expected[k]));
    }
    c.result.summary = summary + " (expected 0.59 0.30 0.07)";
    c.result.details = {{"stationary", pis}, {"symmetric_weights", sym}};
}

void dichotomy(Ctx& c)
{
    const auto corpus = enumerate_connected_graphs(5);
    std::size_t dismantlable = 0, mismatches = 0;
    nlohmann::json bad = nlohmann::json::array();
    for (const auto& h : corpus) {
        const bool d = is_dismantlable(h);
        const bool w = cop_win(h);
        dismantlable += d ? 1 : 0;
        if (d != w) {
            ++mismatches;
            if (bad.size() < 10)
                bad.push_back(h.edges().size());
        }
    }
    c.expect(mismatches == 0, std::to_string(mismatches) + " graphs where dismantlable != cop-win");
    c.result.summary = std::to_string(corpus.size()) + " graphs, " + std::to_string(dismantlable) +
                       " dismantlable, " + std::to_string(mismatches) + " mismatches";
    c.result.details = {{"graphs", corpus.size()}, {"dismantlable", dismantlable}, {"mismatches", mismatches}};
}

void sterile_uniqueness(Ctx& c)
{
    Rng base(c.result.seed, 6);
    SolveOptions opts;
    opts.invariant_only = true;
    opts.threads = c.config.threads;
    std::size_t sterile = 0, solves = 0, failures = 0;
    std::uint64_t draw = 0;
    for (const auto& h : enumerate_connected_graphs(4)) {
        if (fertility(h).fertile)
            continue;
        ++sterile;
        for (unsigned r : {2U, 3U})
            for (int k = 0; k < 20; ++k) {
                auto rng = base.split(draw++);
                const auto lambda = random_activities(h.size(), rng);
                const auto res = solve_fundamental(h, r, lambda, opts);
                ++solves;
                if (res.invariant_count() != 1) {
                    ++failures;
                    c.expect(false, "sterile graph with " + std::to_string(h.size()) + " nodes, r=" +
                                        std::to_string(r) + ": " + std::to_string(res.invariant_count()) +
                                        " invariant solutions");
                }
            }
    }
    c.result.summary = std::to_string(sterile) + " sterile graphs, " + std::to_string(solves) + " solves, " +
                       std::to_string(failures) + " with more than one invariant solution";
    c.result.details = {{"sterile_graphs", sterile}, {"solves", solves}, {"failures", failures}};
}

void r1_uniqueness(Ctx& c)
{
    Rng base(c.result.seed, 7);
    SolveOptions opts;
    opts.threads = c.config.threads;
    std::size_t bipartite = 0, failures = 0;
    for (std::uint64_t k = 0; k < 100; ++k) {
        auto rng = base.split(k);
        const auto q = 2 + rng.below(5);
        const auto h = random_connected_graph(q, 0.5, rng);
        const auto lambda = random_activities(q, rng);
        // Bipartite H at r = 1 has a continuum of semi-invariant solutions; count invariant ones there.
        auto o = opts;
        o.invariant_only = is_bipartite(h);
        bipartite += o.invariant_only ? 1 : 0;
        const auto res = solve_fundamental(h, 1, lambda, o);
        const auto count = o.invariant_only ? res.invariant_count() : res.solutions.size();
        if (count != 1) {
            ++failures;
            c.expect(false, "instance " + std::to_string(k) + ": " + std::to_string(count) + " solution classes");
        }
    }
    c.result.summary = "100 random graphs (" + std::to_string(bipartite) + " bipartite), " +
                       std::to_string(failures) + " without a unique solution class";
    c.result.details = {{"instances", 100}, {"bipartite", bipartite}, {"failures", failures}};
}

void coloring_threshold(Ctx& c)
{
    SolveOptions opts;
    opts.threads = c.config.threads;
    auto solve = [&](std::size_t q, std::vector<double> lambda) {
        return solve_fundamental(complete_graph(q), 2, lambda, opts);
    };
    const auto k2 = solve(2, {1, 1});
    const auto k3 = solve(3, {1, 1, 1});
    const auto k3b = solve(3, {2, 1, 1});
    const auto k4 = solve(4, {1, 1, 1, 1});
    c.expect(k2.measure_count() > 1, "K2 uniform: expected multiple measures, got " + std::to_string(k2.measure_count()));
    c.expect(k3.solutions.size() == 1, "K3 uniform: expected 1 solution, got " + std::to_string(k3.solutions.size()));
    c.expect(k3b.solutions.size() > 1, "K3 (2,1,1): expected multiple, got " + std::to_string(k3b.solutions.size()));
    c.expect(k4.solutions.size() == 1, "K4 uniform: expected 1 solution, got " + std::to_string(k4.solutions.size()));
    c.result.summary = "K2 uniform " + std::to_string(k2.measure_count()) + " measures (2H components " +
                       std::to_string(k2.double_components) + "), K3 uniform " + std::to_string(k3.solutions.size()) +
                       ", K3 (2,1,1) " + std::to_string(k3b.solutions.size()) + ", K4 uniform " +
                       std::to_string(k4.solutions.size());
    c.result.details = {{"K2", to_json(k2)}, {"K3", to_json(k3)}, {"K3_211", to_json(k3b)}, {"K4", to_json(k4)}};
}

void weak_square_isolation(Ctx& c)
{
    std::size_t tested = 0, failures = 0;
    for (const auto& h : enumerate_connected_graphs(4)) {
        if (is_dismantlable(h) || find_fold(h))
            continue;
        ++tested;
        const auto g = weak_square(h);
        const auto q = h.size();
        HomMap pi1(g.size());
        for (Site s = 0; s < g.size(); ++s)
            pi1[s] = static_cast<Node>(s / q);
        const bool ok = is_homomorphism(g, h, pi1) && is_isolated(g, h, pi1);
        if (!ok) {
            ++failures;
            c.expect(false, "pi_1 not isolated for a graph with " + std::to_string(q) + " nodes and " +
                                std::to_string(h.edges().size()) + " edges");
        }
    }
    c.expect(tested > 0, "no fold-free non-dismantlable graphs found");
    c.result.summary = std::to_string(tested) + " fold-free non-dismantlable graphs, " + std::to_string(failures) +
                       " where pi_1 is not isolated";
    c.result.details = {{"tested", tested}, {"failures", failures}};
}

void frozen_rigidity(Ctx& c)
{
    const auto h = complete_graph(3);
    const auto phi = frozen_coloring(2, 3, 4, c.result.seed);
    PartialMap pins(phi.tree.size());
    for (Site s = 0; s < phi.tree.size(); ++s)
        if (phi.tree.geometry().depth[s] == 4)
            pins[s] = phi.spins[s];
    const auto extensions = tree_extension_count(phi.tree, h, pins);
    c.expect(extensions == 1, "depth-4 boundary has " + extensions.str() + " extensions, expected 1");
    const auto deep = frozen_coloring(2, 3, 6, c.result.seed);
    const auto probe = long_range_action_probe(h, 2, 6, deep);
    nlohmann::json excluded = nlohmann::json::array();
    for (std::size_t n = 0; n < probe.achievable.size(); ++n) {
        const auto ex = std::popcount(h.all_nodes() & ~probe.achievable[n]);
        excluded.push_back(ex);
        c.expect(ex == 2, "depth " + std::to_string(n + 1) + ": " + std::to_string(ex) + " root spins excluded");
    }
    c.result.summary = "extensions of the depth-4 boundary: " + extensions.str() + "; excluded root spins at depths 1..6: " +
                       excluded.dump();
    c.result.details = {{"extensions", extensions.str()}, {"excluded", excluded}, {"coloring", to_json(phi, h)}};
}

void mcmc_exactness(Ctx& c)
{
    const auto g = complete_board(2);
    const auto h = hard_core();
    const std::vector<double> lambda{2.0, 1.0};
    const auto hs = enumerate(g, h);
    std::vector<Rational> lam_exact{Rational(2), Rational(1)};
    const auto mu = lambda_measure(hs, lam_exact);
    Chain chain(g, h, lambda, constant_init(g, h, 1), Rng(c.result.seed, 11));
    std::vector<double> observed(hs.size(), 0.0);
    // Successive sweeps are correlated; the chi-square uses every 10th state.
    const std::uint64_t sweeps = 1'000'000, thin = 10;
    for (std::uint64_t k = 1; k <= sweeps; ++k) {
        chain.sweep();
        if (k % thin == 0)
            observed[*hs.find(std::span<const Node>(chain.state()))] += 1;
    }
    const double n = static_cast<double>(sweeps / thin);
    double chi2 = 0;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const double expected = n * mu[k].convert_to<double>();
        chi2 += (observed[k] - expected) * (observed[k] - expected) / expected;
        rows.push_back({{"map", hs.map_as_vector(k)}, {"observed", observed[k]}, {"expected", expected},
                        {"probability", mu[k].str()}});
    }
    const boost::math::chi_squared dist(static_cast<double>(hs.size() - 1));
    const double p = boost::math::cdf(boost::math::complement(dist, chi2));
    c.expect(hs.size() == 3, "hom(K2, hard_core) should have 3 maps");
    c.expect(p > 0.001, "chi-square " + fmt(chi2) + " gives p = " + fmt(p));
    c.result.summary = "chi2 = " + fmt(chi2, 4) + " (2 dof), p = " + fmt(p, 4) + " from " + fmt(n, 8) + " states, one per 10 of " +
                       fmt(static_cast<double>(sweeps), 8) + " sweeps";
    c.result.details = {{"chi2", chi2}, {"p", p}, {"states", rows}};
}

void hardcore_bimodality(Ctx& c)
{
    const auto g = grid_box(15, 2);
    const auto h = hard_core();
    BimodalityOptions opts;
    opts.seed = c.result.seed;
    opts.threads = c.config.threads;
    opts.replicas = 200;
    opts.sweeps = 10000;
    const auto low = bimodality(g, h, std::vector<double>{0.5, 1.0}, opts);
    const auto high = bimodality(g, h, std::vector<double>{5.0, 1.0}, opts);
    c.expect(low.dip_fraction > 0.9, "lambda=0.5: dip fraction " + fmt(low.dip_fraction) + " not > 0.9");
    c.expect(high.dip_fraction < 0.1, "lambda=5: dip fraction " + fmt(high.dip_fraction) + " not < 0.1");
    c.result.summary = "dip fraction " + fmt(low.dip_fraction, 3) + " at lambda=0.5, " + fmt(high.dip_fraction, 3) +
                       " at lambda=5";
    c.result.details = {{"lambda_0.5", to_json(low)}, {"lambda_5", to_json(high)}};
}

void scaling_gauge(Ctx& c)
{
    Rng rng(c.result.seed, 13);
    std::size_t checks = 0;
    for (int k = 0; k < 60; ++k) {
        const auto q = 2 + rng.below(4);
        const auto h = random_connected_graph(q, 0.6, rng);
        const unsigned r = 1 + static_cast<unsigned>(k % 3);
        std::vector<Rational> w, cw;
        const Rational cc(static_cast<long>(1 + rng.below(50)), static_cast<long>(1 + rng.below(50)));
        for (Node i = 0; i < q; ++i) {
            w.emplace_back(static_cast<long>(1 + rng.below(100)), static_cast<long>(1 + rng.below(100)));
            cw.push_back(cc * w.back());
        }
        const auto a = weights_to_activities(h, r, w);
        const auto b = weights_to_activities(h, r, cw);
        const Rational factor = Rational(1) / pow(cc, r - 1);
        for (Node i = 0; i < q; ++i)
            c.expect(b[i] == factor * a[i], "gauge mismatch at r=" + std::to_string(r));
        ++checks;
    }
    c.result.summary = std::to_string(checks) + " exact checks of lambda(c w) = c^(1-r) lambda(w)";
    c.result.details = {{"checks", checks}};
}

void detailed_balance(Ctx& c)
{
    Rng rng(c.result.seed, 14);
    std::size_t graphs = 0;
    while (graphs < 100) {
        const auto q = 2 + rng.below(5);
        const auto h = random_connected_graph(q, 0.5, rng);
        std::vector<Rational> w;
        for (Node i = 0; i < q; ++i)
            w.emplace_back(static_cast<long>(1 + rng.below(1000)), static_cast<long>(1 + rng.below(1000)));
        const auto walk = exact_walk(h, w);
        for (Node i = 0; i < q; ++i)
            for (Node j = 0; j < q; ++j)
                c.expect(walk.stationary[i] * walk.transition(h, i, j) ==
                             walk.stationary[j] * walk.transition(h, j, i),
                         "detailed balance fails on graph " + std::to_string(graphs));
        ++graphs;
    }
    c.result.summary = "exact detailed balance on " + std::to_string(graphs) + " random weighted graphs";
    c.result.details = {{"graphs", graphs}};
}

struct Entry {
    const char* id;
    std::uint64_t seed;
    void (*run)(Ctx&);
};

const Entry registry[] = {
    {"hinge-activities", 0, hinge_activities},
    {"hinge-multiplicity", 0x5EED, hinge_multiplicity},
    {"conditional-symmetry", 0, conditional_symmetry},
    {"stationary-fractions", 0x5EED, stationary_fractions},
    {"dichotomy", 0, dichotomy},
    {"sterile-uniqueness", 6, sterile_uniqueness},
    {"r1-uniqueness", 7, r1_uniqueness},
    {"coloring-threshold", 0x5EED, coloring_threshold},
    {"weak-square-isolation", 0, weak_square_isolation},
    {"frozen-rigidity", 0, frozen_rigidity},
    {"mcmc-exactness", 11, mcmc_exactness},
    {"hardcore-bimodality", 1, hardcore_bimodality},
    {"scaling-gauge", 13, scaling_gauge},
    {"detailed-balance", 14, detailed_balance},
};

}  // namespace

const std::vector<std::string>& experiment_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> out;
        for (const auto& e : registry)
            out.emplace_back(e.id);
        return out;
    }();
    return ids;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    for (const auto& e : registry) {
        if (config.id != e.id)
            continue;
        ExperimentResult result;
        result.id = e.id;
        result.seed = config.seed.value_or(e.seed);
        Ctx ctx{result, config};
        e.run(ctx);
        result.passed = result.diff.empty();
        return result;
    }
    throw std::invalid_argument("unknown experiment id '" + config.id + "'");
}

nlohmann::json to_json(const ExperimentResult& result)
{
    return {{"id", result.id},       {"passed", result.passed}, {"summary", result.summary},
            {"diff", result.diff},   {"seed", result.seed},     {"details", result.details}};
}

ConstraintGraph random_connected_graph(std::size_t q, double p, Rng& rng)
{
    while (true) {
        std::vector<Edge> edges;
        for (Node i = 0; i < q; ++i)
            for (Node j = i; j < q; ++j)
                if (rng.uniform() < p)
                    edges.push_back({i, j});
        if (edges.empty())
            continue;
        ConstraintGraph h(q, edges);
        if (is_connected(h))
            return h;
    }
}

std::vector<double> random_activities(std::size_t q, Rng& rng, double lo, double hi)
{
    std::vector<double> out;
    for (std::size_t i = 0; i < q; ++i)
        out.push_back(std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo))));
    return out;
}

}  // namespace homgibbs
