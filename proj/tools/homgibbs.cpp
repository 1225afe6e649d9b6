#include "homgibbs/classify.hpp"
#include "homgibbs/experiments.hpp"
#include "homgibbs/graph_io.hpp"
#include "homgibbs/homspace.hpp"
#include "homgibbs/mcmc.hpp"
#include "homgibbs/parallel.hpp"
#include "homgibbs/treegibbs.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifndef HOMGIBBS_VERSION
#define HOMGIBBS_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace homgibbs;
using nlohmann::json;

namespace {

constexpr int exit_mismatch = 1;
constexpr int exit_usage = 2;

struct Global {
    unsigned threads = 0;
    std::string out_dir;
    std::vector<std::string> argv;
    std::string command;
    std::optional<std::uint64_t> seed;
};

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_list(const std::string& field, const std::string& text)
{
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(field + "[" + std::to_string(out.size()) + "]: '" + item + "' is not a number");
        }
    }
    if (out.empty())
        throw ConfigError(field + ": empty list");
    return out;
}

std::vector<double> parse_sized(const std::string& field, const std::string& text, std::size_t n)
{
    auto out = parse_list(field, text);
    if (out.size() != n)
        throw ConfigError(field + ": expected " + std::to_string(n) + " values, got " + std::to_string(out.size()));
    for (std::size_t k = 0; k < n; ++k)
        if (!(out[k] > 0))
            throw ConfigError(field + "[" + std::to_string(k) + "]: must be positive");
    return out;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view bytes)
{
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string inputs_hash(const Global& g)
{
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t k = 0; k < g.argv.size(); ++k) {
        const auto& a = g.argv[k];
        if (a == "--threads" || a == "--out-dir") {
            ++k;
            continue;
        }
        if (a.starts_with("--threads=") || a.starts_with("--out-dir="))
            continue;
        h = fnv1a(h, a);
        h = fnv1a(h, std::string_view("\0", 1));
        std::error_code ec;
        if (fs::is_regular_file(a, ec)) {
            std::ifstream in(a, std::ios::binary);
            std::stringstream buf;
            buf << in.rdbuf();
            h = fnv1a(h, buf.str());
        }
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

/// Sends `content` to stdout, or to out_dir/name plus a manifest.
void emit(const Global& g, const std::string& name, const std::string& content, const json& extra = json::object())
{
    if (g.out_dir.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n')
            std::cout << '\n';
        return;
    }
    fs::create_directories(g.out_dir);
    {
        std::ofstream out(fs::path(g.out_dir) / name, std::ios::binary);
        out << content;
        if (!content.empty() && content.back() != '\n')
            out << '\n';
        if (!out)
            throw std::runtime_error("cannot write " + (fs::path(g.out_dir) / name).string());
    }
    json manifest = {{"command", g.command},
                     {"inputs_hash", "fnv1a64:" + inputs_hash(g)},
                     {"seed", g.seed ? json(*g.seed) : json(nullptr)},
                     {"version", HOMGIBBS_VERSION},
                     {"outputs", json::array({name})}};
    for (auto& [k, v] : extra.items())
        manifest[k] = v;
    std::ofstream out(fs::path(g.out_dir) / "manifest.json");
    out << manifest.dump(2) << '\n';
}

// ---------------------------------------------------------------- classify

void add_classify(CLI::App& app, Global& g, std::function<int()>& action)
{
    auto* cmd = app.add_subcommand("classify", "Dismantlability, cop-win and fertility of a constraint graph");
    auto graph = std::make_shared<std::string>();
    auto dot = std::make_shared<bool>(false);
    cmd->add_option("graph", *graph, "graph JSON file or standard name (hinge, hard_core, K3, cycle:5, ...)")->required();
    cmd->add_flag("--dot", *dot, "print the graph in DOT format instead");
    cmd->callback([&, graph, dot] {
        action = [&, graph, dot] {
            const auto h = resolve_constraint_graph(*graph);
            if (*dot) {
                emit(g, "graph.dot", export_dot(h));
                return 0;
            }
            emit(g, "classify.json", to_json(classify(h), h).dump(2));
            return 0;
        };
    });
}

// ---------------------------------------------------------------- homspace

void add_homspace(CLI::App& app, Global& g, std::function<int()>& action)
{
    auto* cmd = app.add_subcommand("homspace", "Enumerate hom(G, H) and report on it");
    struct Opts {
        std::string board, graph, lambda, pins;
        std::vector<std::string> reports{"count"};
        std::uint64_t max_maps = EnumerationLimits{}.max_maps;
        std::uint64_t max_search = EnumerationLimits{}.max_search_nodes;
        bool exact = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("board", o->board, "board JSON file or name (grid:n:d, tree:r:depth, path:len, complete:k)")
        ->required();
    cmd->add_option("graph", o->graph, "constraint graph JSON file or standard name")->required();
    cmd->add_option("--lambda", o->lambda, "activities a,b,... (default uniform)");
    cmd->add_option("--report", o->reports, "count, connectivity, isolated, marginals, gibbs, mixing")
        ->check(CLI::IsMember({"count", "connectivity", "isolated", "marginals", "gibbs", "mixing"}))
        ->delimiter(',');
    cmd->add_option("--pin", o->pins, "pins JSON {\"pins\": [[site, spin], ...]}");
    cmd->add_option("--max-maps", o->max_maps, "enumeration cap on maps")->capture_default_str();
    cmd->add_option("--max-search-nodes", o->max_search, "enumeration cap on search nodes")->capture_default_str();
    cmd->add_flag("--exact", o->exact, "report exact rational marginals");
    cmd->callback([&, o] {
        action = [&, o] {
            const auto board = resolve_board(o->board);
            const auto h = resolve_constraint_graph(o->graph);
            const auto lambda =
                o->lambda.empty() ? std::vector<double>(h.size(), 1.0) : parse_sized("--lambda", o->lambda, h.size());
            PartialMap pins;
            if (!o->pins.empty()) {
                std::ifstream in(o->pins);
                if (!in)
                    throw ConfigError("--pin: cannot open " + o->pins);
                pins = pins_from_json(json::parse(in), board.size(), h.size());
            }
            EnumerationLimits limits;
            limits.max_maps = o->max_maps;
            limits.max_search_nodes = o->max_search;
            const auto hs = enumerate(board, h, limits, pins);
            json out = {{"sites", board.size()}, {"q", h.size()}, {"count", hs.size()}};
            for (const auto& report : o->reports) {
                if (report == "connectivity") {
                    const auto c = connectivity(hs);
                    out["connectivity"] = {{"empty", c.empty},
                                           {"connected", c.connected},
                                           {"components", c.component_count},
                                           {"flip_edges", hs.flip_edge_count()}};
                } else if (report == "isolated") {
                    json maps = json::array();
                    for (auto k : isolated_maps(hs))
                        maps.push_back(hs.map_as_vector(k));
                    out["isolated"] = maps;
                } else if (report == "marginals" && !hs.empty()) {
                    const auto mu = lambda_measure(hs, lambda);
                    json marg = json::array();
                    for (Site s = 0; s < board.size(); ++s)
                        marg.push_back(site_marginal(hs, mu, s));
                    out["marginals"] = marg;
                    if (o->exact) {
                        std::vector<Rational> lam;
                        for (auto l : lambda)
                            lam.push_back(exact_rational(l));
                        json probs = json::array();
                        for (const auto& p : lambda_measure(hs, lam))
                            probs.push_back(p.str());
                        out["measure_exact"] = probs;
                    }
                } else if (report == "gibbs" && !hs.empty()) {
                    const auto mu = lambda_measure(hs, lambda);
                    const auto check = check_one_site_gibbs(hs, lambda, mu);
                    out["gibbs"] = {{"max_violation", check.max_violation}};
                } else if (report == "mixing") {
                    const auto m = empirical_mixing_distance(hs);
                    out["mixing"] = {{"diameter", m.diameter},
                                     {"max_blocked_distance",
                                      m.max_blocked_distance ? json(*m.max_blocked_distance) : json(nullptr)},
                                     {"m", m.m ? json(*m.m) : json(nullptr)}};
                }
            }
            emit(g, "homspace.json", out.dump(2));
            return 0;
        };
    });
}

// ---------------------------------------------------------------- treegibbs

struct SolveFlags {
    SolveOptions o;
    std::uint64_t seed = SolveOptions{}.seed;
};

void solve_flags(CLI::App* cmd, SolveFlags& f)
{
    cmd->add_option("--starts", f.o.starts, "multi-start count")->capture_default_str();
    cmd->add_option("--tol", f.o.tol, "residual accepted as a solution")->capture_default_str();
    cmd->add_option("--max-iter", f.o.max_iter, "fixed-point sweeps per start")->capture_default_str();
    cmd->add_option("--newton-iter", f.o.newton_iter, "damped Newton steps per candidate")->capture_default_str();
    cmd->add_option("--dedup-tol", f.o.dedup_tol, "deduplication distance")->capture_default_str();
    cmd->add_flag("--invariant-only", f.o.invariant_only, "solve only for u = v");
    cmd->add_option("--seed", f.seed, "seed for random starts")->capture_default_str();
}

CLI::App* add_solve(CLI::App& parent, Global& g, std::function<int()>& action)
{
    auto* cmd = parent.add_subcommand("solve", "Solve the fundamental equations");
    struct Opts {
        std::string graph, lambda;
        unsigned r = 2;
        SolveFlags flags;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("graph", o->graph, "constraint graph JSON file or standard name")->required();
    cmd->add_option("--r", o->r, "branching factor")->required()->check(CLI::Range(1U, 64U));
    cmd->add_option("--lambda", o->lambda, "activities a,b,...")->required();
    solve_flags(cmd, o->flags);
    cmd->callback([&, o] {
        action = [&, o] {
            const auto h = resolve_constraint_graph(o->graph);
            const auto lambda = parse_sized("--lambda", o->lambda, h.size());
            auto opts = o->flags.o;
            opts.seed = o->flags.seed;
            opts.threads = g.threads;
            g.seed = opts.seed;
            emit(g, "solutions.json", to_json(solve_fundamental(h, o->r, lambda, opts)).dump(2));
            return 0;
        };
    });
    return cmd;
}

CLI::App* add_sweep(CLI::App& parent, Global& g, std::function<int()>& action)
{
    auto* cmd = parent.add_subcommand("sweep", "Solution counts along an activity family, with bisected transitions");
    struct Opts {
        std::string graph, family = "hinge", count = "invariant";
        unsigned r = 2;
        double t_min = 0.5, t_max = 10, bracket_tol = 1e-6;
        unsigned steps = 20;
        SolveFlags flags;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("graph", o->graph, "constraint graph (default: matches the family)");
    cmd->add_option("--family", o->family, "hinge (t,1,t), hard_core (t,1), ray (t,1,...,1) on K_q")
        ->check(CLI::IsMember({"hinge", "hard_core", "ray"}))
        ->capture_default_str();
    cmd->add_option("--r", o->r, "branching factor")->capture_default_str()->check(CLI::Range(1U, 64U));
    cmd->add_option("--t-min", o->t_min, "first t")->capture_default_str();
    cmd->add_option("--t-max", o->t_max, "last t")->capture_default_str();
    cmd->add_option("--t-steps", o->steps, "grid points")->capture_default_str()->check(CLI::Range(1U, 100000U));
    cmd->add_option("--count", o->count, "invariant, classes or measures")
        ->check(CLI::IsMember({"invariant", "classes", "measures"}))
        ->capture_default_str();
    cmd->add_option("--bracket-tol", o->bracket_tol, "bisection width for count changes")->capture_default_str();
    solve_flags(cmd, o->flags);
    cmd->callback([&, o] {
        action = [&, o] {
            ConstraintGraph h;
            LambdaFamily family;
            if (o->family == "hinge") {
                h = o->graph.empty() ? hinge() : resolve_constraint_graph(o->graph);
                family = hinge_family();
            } else if (o->family == "hard_core") {
                h = o->graph.empty() ? hard_core() : resolve_constraint_graph(o->graph);
                family = hard_core_family();
            } else {
                h = o->graph.empty() ? complete_graph(3) : resolve_constraint_graph(o->graph);
                family = complete_ray_family(h.size());
            }
            if (family.at(1.0).size() != h.size())
                throw ConfigError("--family: " + o->family + " does not fit a graph with " + std::to_string(h.size()) +
                                  " nodes");
            if (!(o->t_min > 0) || o->t_max < o->t_min)
                throw ConfigError("--t-min/--t-max: need 0 < t-min <= t-max");
            std::vector<double> ts;
            for (unsigned k = 0; k < o->steps; ++k)
                ts.push_back(o->steps == 1 ? o->t_min
                                           : o->t_min + (o->t_max - o->t_min) * k / static_cast<double>(o->steps - 1));
            const auto kind = o->count == "invariant" ? CountKind::invariant
                              : o->count == "classes" ? CountKind::all_classes
                                                      : CountKind::measures;
            auto opts = o->flags.o;
            opts.seed = o->flags.seed;
            opts.threads = g.threads;
            g.seed = opts.seed;
            const auto rep = count_transition(h, o->r, family, ts, kind, opts, o->bracket_tol);
            std::ostringstream csv;
            csv.precision(12);
            csv << "t,solution_count\n";
            for (const auto& s : rep.samples)
                csv << s.t << ',' << s.count << '\n';
            for (const auto& b : rep.brackets)
                csv << "# transition " << b.count_lo << "->" << b.count_hi << " in [" << b.lo << ", " << b.hi << "]\n";
            emit(g, "sweep.csv", csv.str());
            return 0;
        };
    });
    return cmd;
}

CLI::App* add_sample(CLI::App& parent, Global& g, std::function<int()>& action)
{
    auto* cmd = parent.add_subcommand("sample", "Colour a Cayley tree by the branching random walk");
    struct Opts {
        std::string graph, w, dot;
        unsigned r = 2, depth = 4;
        std::uint64_t seed = 1;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("graph", o->graph, "constraint graph JSON file or standard name")->required();
    cmd->add_option("--r", o->r, "branching factor")->capture_default_str()->check(CLI::Range(1U, 64U));
    cmd->add_option("--w", o->w, "node weights a,b,...")->required();
    cmd->add_option("--depth", o->depth, "tree depth")->capture_default_str()->check(CLI::Range(0U, 30U));
    cmd->add_option("--seed", o->seed, "sampling seed")->capture_default_str();
    cmd->add_option("--dot", o->dot, "also write the coloured tree as DOT to this file");
    cmd->callback([&, o] {
        action = [&, o] {
            const auto h = resolve_constraint_graph(o->graph);
            const auto w = parse_sized("--w", o->w, h.size());
            g.seed = o->seed;
            const BranchingWalk walk(h, o->r, w);
            const auto config = sample_branching_walk(walk, o->depth, o->seed);
            auto j = to_json(config, h);
            j["activities"] = walk.activities().normalized;
            j["stationary"] = walk.stationary();
            std::string dot = "graph tree {\n  node [style=filled];\n";
            for (Site s = 0; s < config.tree.size(); ++s)
                dot += "  " + std::to_string(s) + " [label=\"" + h.label(config.spins[s]) + "\"];\n";
            for (const auto& e : config.tree.edges())
                dot += "  " + std::to_string(e.a) + " -- " + std::to_string(e.b) + ";\n";
            dot += "}\n";
            j["dot"] = dot;
            if (!o->dot.empty()) {
                std::ofstream out(o->dot);
                out << dot;
                if (!out)
                    throw std::runtime_error("cannot write " + o->dot);
            }
            emit(g, "sample.json", j.dump(2));
            return 0;
        };
    });
    return cmd;
}

// ---------------------------------------------------------------- mcmc

void add_mcmc(CLI::App& app, Global& g, std::function<int()>& action)
{
    auto* mcmc = app.add_subcommand("mcmc", "Single-site point process on finite boards");
    mcmc->require_subcommand(1);
    auto* cmd = mcmc->add_subcommand("run", "Run replicas of the heat-bath chain");
    struct Opts {
        std::string board = "grid:15:2", graph = "hard_core", lambda, init = "alternate", pins, out, csv, render;
        std::uint64_t sweeps = 1000, seed = 1;
        std::size_t replicas = 1;
        double burn_in = 0.2;
        double dip_lo = 0.4, dip_hi = 0.6;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("model", o->graph, "shorthand for --graph (e.g. hardcore, hinge)");
    cmd->add_option("--board", o->board, "board JSON file or name")->capture_default_str();
    cmd->add_option("--graph", o->graph, "constraint graph JSON file or standard name")->capture_default_str();
    cmd->add_option("--lambda", o->lambda, "activities a,b,... (default uniform)");
    cmd->add_option("--sweeps", o->sweeps, "sweeps per replica")->capture_default_str();
    cmd->add_option("--replicas", o->replicas, "independent replicas")->capture_default_str()->check(CLI::Range(
        std::size_t{1}, std::size_t{1000000}));
    cmd->add_option("--seed", o->seed, "master seed; replica k uses split(k)")->capture_default_str();
    cmd->add_option("--init", o->init,
                    "even, odd, alternate (half even, half odd), random, constant:<spin>, file:<path>")
        ->capture_default_str();
    cmd->add_option("--pin", o->pins, "pins JSON {\"pins\": [[site, spin], ...]}");
    cmd->add_option("--burn-in", o->burn_in, "fraction of sweeps excluded from means")->capture_default_str();
    cmd->add_option("--dip-lo", o->dip_lo, "lower end of the dip window")->capture_default_str();
    cmd->add_option("--dip-hi", o->dip_hi, "upper end of the dip window")->capture_default_str();
    cmd->add_option("--out", o->out, "stats JSON path (default stdout or <out-dir>/stats.json)");
    cmd->add_option("--csv", o->csv, "time series CSV of replica 0");
    cmd->add_option("--render", o->render, "directory for PPM images of initial and final states");
    cmd->callback([&, o] {
        action = [&, o] {
            const auto board = resolve_board(o->board);
            const auto h = resolve_constraint_graph(o->graph);
            const auto lambda =
                o->lambda.empty() ? std::vector<double>(h.size(), 1.0) : parse_sized("--lambda", o->lambda, h.size());
            PartialMap pins;
            if (!o->pins.empty()) {
                std::ifstream in(o->pins);
                if (!in)
                    throw ConfigError("--pin: cannot open " + o->pins);
                pins = pins_from_json(json::parse(in), board.size(), h.size());
            }
            g.seed = o->seed;
            const Rng base(o->seed, 0x4D43);
            auto make_init = [&](std::size_t k) -> HomMap {
                HomMap init;
                const auto& mode = o->init;
                if (mode == "even" || mode == "odd" || mode == "alternate") {
                    const unsigned parity = mode == "odd" || (mode == "alternate" && k >= (o->replicas + 1) / 2);
                    init = sublattice_init(board, h, parity);
                } else if (mode == "random") {
                    return random_greedy_init(board, h, lambda, base.split(k).split(0), pins);
                } else if (mode.starts_with("constant:")) {
                    init = constant_init(board, h, static_cast<Node>(std::stoul(mode.substr(9))));
                } else if (mode.starts_with("file:")) {
                    std::ifstream in(mode.substr(5));
                    if (!in)
                        throw ConfigError("--init: cannot open " + mode.substr(5));
                    const auto j = json::parse(in);
                    init = (j.is_object() ? j.at("spins") : j).get<HomMap>();
                } else {
                    throw ConfigError("--init: unknown mode '" + mode + "'");
                }
                if (!pins.empty())
                    for (Site s = 0; s < board.size(); ++s)
                        if (pins[s])
                            init[s] = *pins[s];
                return init;
            };
            RunOptions ropts;
            ropts.sweeps = o->sweeps;
            ropts.burn_in = o->burn_in;
            std::vector<RunStats> runs(o->replicas);
            parallel_for(o->replicas, g.threads, [&](std::size_t k) {
                runs[k] = run(board, h, lambda, make_init(k), base.split(k).split(1), ropts, pins);
            });
            json out;
            out["board"] = o->board;
            out["graph"] = o->graph;
            out["lambda"] = lambda;
            out["seed"] = o->seed;
            out["init"] = o->init;
            out["replicas"] = json::array();
            for (const auto& r : runs)
                out["replicas"].push_back(to_json(r));
            if (runs.front().has_parity) {
                std::vector<double> final_rho;
                std::size_t dip = 0;
                std::vector<std::size_t> histogram(20, 0);
                for (const auto& r : runs) {
                    final_rho.push_back(parity_series(r).back());
                    dip += final_rho.back() >= o->dip_lo && final_rho.back() <= o->dip_hi ? 1 : 0;
                    ++histogram[std::min<std::size_t>(19, static_cast<std::size_t>(final_rho.back() * 20))];
                }
                out["bimodality"] = {{"final_rho", final_rho},
                                     {"histogram", histogram},
                                     {"dip_fraction", static_cast<double>(dip) / static_cast<double>(runs.size())}};
            }
            if (!o->csv.empty()) {
                std::ofstream csv(o->csv);
                csv << to_csv(runs.front());
                if (!csv)
                    throw std::runtime_error("cannot write " + o->csv);
            }
            if (!o->render.empty()) {
                fs::create_directories(o->render);
                RenderOptions ro;
                ro.parity_colors = h == hard_core();
                render(board, h, runs.front().initial, fs::path(o->render) / "initial.ppm", ro);
                render(board, h, runs.front().final_state, fs::path(o->render) / "final.ppm", ro);
            }
            if (!o->out.empty()) {
                std::ofstream file(o->out);
                file << out.dump(2) << '\n';
                if (!file)
                    throw std::runtime_error("cannot write " + o->out);
                if (!g.out_dir.empty())
                    emit(g, "stats.json", out.dump(2));
            } else {
                emit(g, "stats.json", out.dump(2));
            }
            return 0;
        };
    });

    auto* dom = mcmc->add_subcommand("dominance", "Widom-Rowlinson dominance on the hinge along lambda = (t, y, t)");
    struct DomOpts {
        std::string board = "grid:15:2", t = "0.2,1,2,5,10";
        DominanceOptions d;
    };
    auto od = std::make_shared<DomOpts>();
    dom->add_option("--board", od->board, "board JSON file or name")->capture_default_str();
    dom->add_option("--t", od->t, "t values")->capture_default_str();
    dom->add_option("--sweeps", od->d.sweeps, "sweeps per replica")->capture_default_str();
    dom->add_option("--replicas", od->d.replicas, "replicas per t")->capture_default_str();
    dom->add_option("--seed", od->d.seed, "master seed")->capture_default_str();
    dom->add_option("--lambda-yellow", od->d.lambda_yellow, "yellow activity")->capture_default_str();
    dom->callback([&, od] {
        action = [&, od] {
            const auto board = resolve_board(od->board);
            const auto ts = parse_list("--t", od->t);
            auto d = od->d;
            d.threads = g.threads;
            g.seed = d.seed;
            emit(g, "dominance.json", to_json(wr_dominance(board, ts, d)).dump(2));
            return 0;
        };
    });
}

// ---------------------------------------------------------------- reproduce

void add_reproduce(CLI::App& app, Global& g, std::function<int()>& action)
{
    auto* cmd = app.add_subcommand("reproduce", "Run a packaged experiment and compare with pinned expectations");
    auto id = std::make_shared<std::string>();
    auto seed = std::make_shared<std::optional<std::uint64_t>>();
    auto ids = experiment_ids();
    ids.push_back("all");
    cmd->add_option("id", *id, "experiment id or 'all'")->required()->check(CLI::IsMember(ids));
    cmd->add_option("--seed", *seed, "override the experiment's pinned seed");
    cmd->callback([&, id, seed] {
        action = [&, id, seed] {
            std::vector<std::string> todo = *id == "all" ? experiment_ids() : std::vector<std::string>{*id};
            bool all_ok = true;
            json reports = json::array();
            for (const auto& e : todo) {
                ExperimentConfig cfg;
                cfg.id = e;
                cfg.seed = *seed;
                cfg.threads = g.threads;
                const auto res = run_experiment(cfg);
                all_ok = all_ok && res.passed;
                std::cout << (res.passed ? "PASS " : "FAIL ") << res.id << ": " << res.summary << '\n';
                for (const auto& d : res.diff)
                    std::cout << "  - " << d << '\n';
                reports.push_back(to_json(res));
                if (todo.size() == 1)
                    g.seed = res.seed;
            }
            if (!g.out_dir.empty())
                emit(g, "report.json", (todo.size() == 1 ? reports[0] : reports).dump(2));
            return all_ok ? 0 : exit_mismatch;
        };
    });
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"homgibbs: hard-constraint Gibbs measures on graph homomorphism spaces"};
    app.set_version_flag("--version", std::string(HOMGIBBS_VERSION));
    app.require_subcommand(1);
    Global g;
    for (int k = 1; k < argc; ++k)
        g.argv.emplace_back(argv[k]);
    app.add_option("--threads", g.threads, "worker threads (default: HOMGIBBS_THREADS or all cores)");
    app.add_option("--out-dir", g.out_dir, "write outputs and a manifest here instead of stdout");

    std::function<int()> action;
    add_classify(app, g, action);
    add_homspace(app, g, action);
    auto* tg = app.add_subcommand("treegibbs", "Simple Gibbs measures on Cayley trees");
    tg->require_subcommand(1);
    add_solve(*tg, g, action);
    add_sweep(*tg, g, action);
    add_sample(*tg, g, action);
    add_solve(app, g, action)->group("Aliases");
    add_sweep(app, g, action)->group("Aliases");
    add_sample(app, g, action)->group("Aliases");
    add_mcmc(app, g, action);
    add_reproduce(app, g, action);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }
    for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front())
        g.command += (g.command.empty() ? "" : " ") + sub->get_name();
    try {
        return action ? action() : exit_usage;
    } catch (const EnumerationCapExceeded& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
}
