#include "homgibbs/mcmc.hpp"

#include "homgibbs/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace homgibbs {

namespace {

std::vector<std::uint8_t> parities(const Board& g)
{
    std::vector<std::uint8_t> out(g.size());
    if (g.geometry().kind == BoardGeometry::Kind::none) {
        auto sides = bipartition(g);
        if (!sides)
            throw std::invalid_argument("parity statistics need a bipartite board");
        return *sides;
    }
    for (Site s = 0; s < g.size(); ++s)
        out[s] = static_cast<std::uint8_t>(site_parity(g, s));
    return out;
}

void check_lambda(const ConstraintGraph& h, std::span<const double> lambda)
{
    if (lambda.size() != h.size())
        throw std::invalid_argument("activity vector has " + std::to_string(lambda.size()) + " entries, expected " +
                                    std::to_string(h.size()));
    for (auto l : lambda)
        if (!(l > 0) || !std::isfinite(l))
            throw std::invalid_argument("activities must be positive and finite");
}

void check_pins(const Board& g, const ConstraintGraph& h, const PartialMap& pins)
{
    if (pins.empty())
        return;
    if (pins.size() != g.size())
        throw std::invalid_argument("pin map has " + std::to_string(pins.size()) + " entries, board has " +
                                    std::to_string(g.size()) + " sites");
    for (const auto& p : pins)
        if (p && *p >= h.size())
            throw std::invalid_argument("pinned spin out of range");
}

Node draw_restricted(std::span<const double> lambda, NodeMask legal, double u)
{
    double total = 0;
    for (auto m = legal; m; m &= m - 1)
        total += lambda[static_cast<Node>(std::countr_zero(m))];
    double target = u * total;
    Node last = 0;
    for (auto m = legal; m; m &= m - 1) {
        last = static_cast<Node>(std::countr_zero(m));
        target -= lambda[last];
        if (target < 0)
            return last;
    }
    return last;
}

}  // namespace

NodeMask default_occupied(const ConstraintGraph& h)
{
    NodeMask out = 0;
    for (Node i = 0; i < h.size(); ++i)
        if (h.row(i) != h.all_nodes())
            out |= node_bit(i);
    return out;
}

// ---------------------------------------------------------------- initial states

HomMap constant_init(const Board& g, const ConstraintGraph& h, Node spin)
{
    if (spin >= h.size())
        throw std::invalid_argument("spin out of range");
    HomMap out(g.size(), spin);
    if (!is_homomorphism(g, h, out))
        throw std::invalid_argument("constant map to " + h.label(spin) + " is not a homomorphism (node is unlooped)");
    return out;
}

HomMap sublattice_init(const Board& g, const ConstraintGraph& h, unsigned parity)
{
    const auto side = parities(g);
    const auto occupied = default_occupied(h);
    for (Node occ = 0; occ < h.size(); ++occ) {
        if (!(occupied & node_bit(occ)))
            continue;
        for (Node bg = 0; bg < h.size(); ++bg) {
            if (!h.looped(bg) || !h.adjacent(occ, bg))
                continue;
            HomMap out(g.size(), bg);
            for (Site s = 0; s < g.size(); ++s)
                if (side[s] == (parity & 1U))
                    out[s] = occ;
            return out;
        }
    }
    throw std::invalid_argument("no occupied spin with a looped neighbour: sublattice start undefined");
}

HomMap random_greedy_init(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, Rng rng,
                          const PartialMap& pins)
{
    check_lambda(h, lambda);
    check_pins(g, h, pins);
    const auto n = g.size();
    std::vector<Site> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int attempt = 0; attempt < 100; ++attempt) {
        for (std::size_t k = n; k > 1; --k)
            std::swap(order[k - 1], order[rng.below(k)]);
        PartialMap assigned = pins.empty() ? PartialMap(n) : pins;
        bool ok = true;
        for (auto s : order) {
            if (assigned[s])
                continue;
            NodeMask legal = h.all_nodes();
            for (auto t : g.neighbors(s))
                if (assigned[t])
                    legal &= h.row(*assigned[t]);
            if (!legal) {
                ok = false;
                break;
            }
            assigned[s] = draw_restricted(lambda, legal, rng.uniform());
        }
        if (!ok)
            continue;
        HomMap out(n);
        for (Site s = 0; s < n; ++s)
            out[s] = *assigned[s];
        if (is_homomorphism(g, h, out))
            return out;
    }
    throw std::runtime_error("random greedy construction failed 100 times; supply an initial map");
}

// ---------------------------------------------------------------- chain

Chain::Chain(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, HomMap init, Rng rng,
             const PartialMap& pins)
    : g_(&g), h_(&h), lambda_(lambda.begin(), lambda.end()), spins_(std::move(init)), rng_(rng)
{
    check_lambda(h, lambda);
    check_pins(g, h, pins);
    if (spins_.size() != g.size())
        throw std::invalid_argument("initial map has " + std::to_string(spins_.size()) + " entries, board has " +
                                    std::to_string(g.size()) + " sites");
    if (!is_homomorphism(g, h, spins_))
        throw std::invalid_argument("initial map is not a homomorphism");
    for (Site s = 0; s < g.size(); ++s) {
        if (!pins.empty() && pins[s]) {
            if (*pins[s] != spins_[s])
                throw std::invalid_argument("initial map disagrees with pin at site " + std::to_string(s));
            continue;
        }
        free_.push_back(s);
    }
    for (Node i = 0; i < h.size(); ++i)
        rows_.push_back(h.row(i));

    const auto q = h.size();
    if (q <= table_limit) {
        cdf_.assign((std::size_t{1} << q) * q, 1.0);
        for (NodeMask mask = 1; mask < (NodeMask{1} << q); ++mask) {
            double total = 0;
            for (Node j = 0; j < q; ++j)
                if (mask & node_bit(j))
                    total += lambda_[j];
            double acc = 0;
            auto* row = cdf_.data() + mask * q;
            const auto top = static_cast<Node>(63 - std::countl_zero(mask));
            for (Node j = 0; j < q; ++j) {
                if (mask & node_bit(j))
                    acc += lambda_[j];
                row[j] = j >= top ? 1.0 : acc / total;
            }
        }
    }
}

Node Chain::draw(NodeMask legal)
{
    const double u = rng_.uniform();
    const auto q = h_->size();
    if (q <= table_limit) {
        const double* row = cdf_.data() + legal * q;
        Node j = 0;
        while (!(u < row[j]))
            ++j;
        return j;
    }
    return draw_restricted(lambda_, legal, u);
}

void Chain::step()
{
    ++steps_;
    if (free_.empty())
        return;
    const Site s = free_[rng_.below(free_.size())];
    NodeMask legal = ~NodeMask{0};
    for (auto t : g_->neighbors(s))
        legal &= rows_[spins_[t]];
    legal &= h_->all_nodes();
    // The current spin is always legal.
    const Node j = draw(legal);
    changes_ += j != spins_[s] ? 1 : 0;
    spins_[s] = j;
}

void Chain::sweep()
{
    for (std::size_t k = 0; k < free_.size(); ++k)
        step();
}

bool Chain::valid() const { return is_homomorphism(*g_, *h_, spins_); }

// ---------------------------------------------------------------- runs

RunStats run(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, HomMap init, Rng rng,
             const RunOptions& options, const PartialMap& pins)
{
    if (options.burn_in < 0 || options.burn_in >= 1)
        throw std::invalid_argument("burn-in fraction must lie in [0, 1)");
    Chain chain(g, h, lambda, std::move(init), rng, pins);
    RunStats stats;
    stats.sweeps = options.sweeps;
    stats.burn_in = static_cast<std::uint64_t>(std::floor(options.burn_in * static_cast<double>(options.sweeps)));
    stats.n_sites = g.size();
    stats.q = h.size();
    stats.initial = chain.state();
    const auto occupied = options.occupied ? options.occupied : default_occupied(h);
    std::vector<std::uint8_t> side;
    if (auto sides = bipartition(g)) {
        side = parities(g);
        stats.has_parity = true;
    }
    std::vector<std::uint32_t> counts(h.size());
    auto record = [&] {
        const auto& spins = chain.state();
        std::fill(counts.begin(), counts.end(), 0);
        std::uint32_t even = 0, odd = 0;
        for (Site s = 0; s < spins.size(); ++s) {
            ++counts[spins[s]];
            if (stats.has_parity && (occupied & node_bit(spins[s])))
                ++(side[s] ? odd : even);
        }
        stats.occupied.push_back(even + odd);
        if (!stats.has_parity) {
            std::uint32_t occ = 0;
            for (Node i = 0; i < h.size(); ++i)
                if (occupied & node_bit(i))
                    occ += counts[i];
            stats.occupied.back() = occ;
        } else {
            stats.even_occupied.push_back(even);
            stats.odd_occupied.push_back(odd);
        }
        stats.color_counts.insert(stats.color_counts.end(), counts.begin(), counts.end());
        if (options.keep_snapshots)
            stats.snapshots.push_back(spins);
    };
    record();
    for (std::uint64_t k = 1; k <= options.sweeps; ++k) {
        chain.sweep();
        if (options.validate_every && k % options.validate_every == 0 && !chain.valid())
            throw std::logic_error("chain left hom(G, H) at sweep " + std::to_string(k));
        record();
    }
    stats.updates = chain.steps();
    stats.changes = chain.changes();
    stats.final_state = chain.state();
    return stats;
}

std::vector<double> parity_series(const RunStats& stats)
{
    if (!stats.has_parity)
        throw std::invalid_argument("parity statistics need a bipartite board");
    std::vector<double> out;
    for (std::size_t k = 0; k < stats.even_occupied.size(); ++k) {
        const double total = stats.even_occupied[k] + stats.odd_occupied[k];
        out.push_back(total > 0 ? stats.even_occupied[k] / total : 0.5);
    }
    return out;
}

double integrated_autocorrelation(std::span<const double> series)
{
    const auto n = series.size();
    if (n < 2)
        return 1.0;
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
    auto autocov = [&](std::size_t lag) {
        double acc = 0;
        for (std::size_t k = 0; k + lag < n; ++k)
            acc += (series[k] - mean) * (series[k + lag] - mean);
        return acc / static_cast<double>(n);
    };
    const double c0 = autocov(0);
    if (!(c0 > 0))
        return 1.0;
    double tau = 1.0;
    for (std::size_t lag = 1; lag < n; ++lag) {
        tau += 2.0 * autocov(lag) / c0;
        if (static_cast<double>(lag) >= 5.0 * tau)
            break;
    }
    return std::max(tau, 1.0);
}

nlohmann::json to_json(const RunStats& stats)
{
    nlohmann::json j;
    j["sweeps"] = stats.sweeps;
    j["burn_in"] = stats.burn_in;
    j["n_sites"] = stats.n_sites;
    j["q"] = stats.q;
    j["updates"] = stats.updates;
    j["changes"] = stats.changes;
    j["occupied"] = stats.occupied;
    if (stats.has_parity) {
        j["even_occupied"] = stats.even_occupied;
        j["odd_occupied"] = stats.odd_occupied;
        const auto rho = parity_series(stats);
        j["rho"] = rho;
        if (stats.burn_in < rho.size()) {
            std::span<const double> kept(rho.begin() + static_cast<std::ptrdiff_t>(stats.burn_in), rho.end());
            j["mean_rho"] = std::accumulate(kept.begin(), kept.end(), 0.0) / static_cast<double>(kept.size());
            j["tau_rho"] = integrated_autocorrelation(kept);
        }
    }
    nlohmann::json counts = nlohmann::json::array();
    for (std::size_t k = 0; k * stats.q < stats.color_counts.size(); ++k)
        counts.push_back(std::vector<std::uint32_t>(stats.color_counts.begin() + static_cast<std::ptrdiff_t>(k * stats.q),
                                                    stats.color_counts.begin() +
                                                        static_cast<std::ptrdiff_t>((k + 1) * stats.q)));
    j["color_counts"] = counts;
    j["final_state"] = stats.final_state;
    return j;
}

std::string to_csv(const RunStats& stats)
{
    std::ostringstream out;
    out << "sweep,occupied,even,odd,rho";
    for (std::size_t c = 0; c < stats.q; ++c)
        out << ",count_" << c;
    out << '\n';
    const auto rho = stats.has_parity ? parity_series(stats) : std::vector<double>{};
    for (std::size_t k = 0; k < stats.occupied.size(); ++k) {
        out << k << ',' << stats.occupied[k];
        if (stats.has_parity)
            out << ',' << stats.even_occupied[k] << ',' << stats.odd_occupied[k] << ',' << rho[k];
        else
            out << ",,,";
        for (std::size_t c = 0; c < stats.q; ++c)
            out << ',' << stats.color_counts[k * stats.q + c];
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------- phenomenology

BimodalityReport bimodality(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                            const BimodalityOptions& options)
{
    const auto side = parities(g);
    if (options.replicas == 0 || options.bins == 0)
        throw std::invalid_argument("bimodality needs at least one replica and one bin");
    const auto occupied = default_occupied(h);
    const auto even_start = sublattice_init(g, h, 0);
    const auto odd_start = sublattice_init(g, h, 1);
    const auto half = (options.replicas + 1) / 2;
    const Rng base(options.seed, 0xB1);

    BimodalityReport rep;
    rep.final_rho.assign(options.replicas, 0.0);
    parallel_for(options.replicas, options.threads, [&](std::size_t k) {
        Chain chain(g, h, lambda, k < half ? even_start : odd_start, base.split(k));
        for (std::uint64_t s = 0; s < options.sweeps; ++s)
            chain.sweep();
        double even = 0, odd = 0;
        for (Site s = 0; s < g.size(); ++s)
            if (occupied & node_bit(chain.state()[s]))
                (side[s] ? odd : even) += 1;
        rep.final_rho[k] = even + odd > 0 ? even / (even + odd) : 0.5;
    });
    rep.histogram.assign(options.bins, 0);
    std::size_t dip = 0;
    double sum_even = 0, sum_odd = 0;
    for (std::size_t k = 0; k < rep.final_rho.size(); ++k) {
        const double rho = rep.final_rho[k];
        const auto bin = std::min(options.bins - 1, static_cast<std::size_t>(rho * static_cast<double>(options.bins)));
        ++rep.histogram[bin];
        dip += rho >= options.dip_lo && rho <= options.dip_hi ? 1 : 0;
        (k < half ? sum_even : sum_odd) += rho;
    }
    rep.dip_fraction = static_cast<double>(dip) / static_cast<double>(options.replicas);
    rep.mean_rho_even_start = sum_even / static_cast<double>(half);
    rep.mean_rho_odd_start = options.replicas > half ? sum_odd / static_cast<double>(options.replicas - half) : 0.0;
    return rep;
}

nlohmann::json to_json(const BimodalityReport& report)
{
    return {{"final_rho", report.final_rho},
            {"histogram", report.histogram},
            {"dip_fraction", report.dip_fraction},
            {"mean_rho_even_start", report.mean_rho_even_start},
            {"mean_rho_odd_start", report.mean_rho_odd_start}};
}

DominanceReport wr_dominance(const Board& g, std::span<const double> t_values, const DominanceOptions& options)
{
    const auto h = hinge();
    const Node green = 0, red = 2;
    DominanceReport rep;
    const Rng base(options.seed, 0x3D);
    for (std::size_t p = 0; p < t_values.size(); ++p) {
        DominanceReport::Point point;
        point.t = t_values[p];
        const std::vector<double> lambda{point.t, options.lambda_yellow, point.t};
        point.dominance.assign(options.replicas, 0.0);
        parallel_for(options.replicas, options.threads, [&](std::size_t k) {
            auto rng = base.split(p * options.replicas + k);
            auto init = random_greedy_init(g, h, lambda, rng.split(0));
            Chain chain(g, h, lambda, std::move(init), rng.split(1));
            for (std::uint64_t s = 0; s < options.sweeps; ++s)
                chain.sweep();
            double gsum = 0, rsum = 0;
            for (auto spin : chain.state()) {
                gsum += spin == green ? 1 : 0;
                rsum += spin == red ? 1 : 0;
            }
            point.dominance[k] = gsum + rsum > 0 ? (gsum - rsum) / (gsum + rsum) : 0.0;
        });
        for (auto d : point.dominance) {
            point.mean_abs += std::abs(d);
            point.fraction_mixed += std::abs(d) < options.concentrated ? 1 : 0;
            point.fraction_dominated += std::abs(d) > options.dominated ? 1 : 0;
        }
        const auto n = static_cast<double>(std::max<std::size_t>(options.replicas, 1));
        point.mean_abs /= n;
        point.fraction_mixed /= n;
        point.fraction_dominated /= n;
        rep.points.push_back(std::move(point));
    }
    for (std::size_t p = 1; p < rep.points.size(); ++p)
        if (rep.points[p].mean_abs > 0.5 && rep.points[p - 1].mean_abs <= 0.5) {
            rep.onset_lo = rep.points[p - 1].t;
            rep.onset_hi = rep.points[p].t;
            break;
        }
    return rep;
}

nlohmann::json to_json(const DominanceReport& report)
{
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (const auto& p : report.points)
        j["points"].push_back({{"t", p.t},
                               {"dominance", p.dominance},
                               {"mean_abs", p.mean_abs},
                               {"fraction_mixed", p.fraction_mixed},
                               {"fraction_dominated", p.fraction_dominated}});
    j["onset"] = report.onset_lo ? nlohmann::json{*report.onset_lo, *report.onset_hi} : nlohmann::json(nullptr);
    return j;
}

// ---------------------------------------------------------------- pins

std::vector<Site> grid_boundary(const Board& g)
{
    const auto& geo = g.geometry();
    if (geo.kind != BoardGeometry::Kind::grid)
        throw std::invalid_argument("grid_boundary needs a grid board");
    std::vector<Site> out;
    for (Site s = 0; s < g.size(); ++s)
        for (unsigned k = 0; k < geo.dim; ++k)
            if (std::abs(geo.coords[s][k]) == geo.half_width) {
                out.push_back(s);
                break;
            }
    return out;
}

PartialMap pins_from_json(const nlohmann::json& j, std::size_t n_sites, std::size_t q)
{
    if (!j.is_object() || !j.contains("pins") || !j["pins"].is_array())
        throw std::invalid_argument("pins: expected an object with a \"pins\" array");
    PartialMap out(n_sites);
    for (std::size_t k = 0; k < j["pins"].size(); ++k) {
        const auto& entry = j["pins"][k];
        const auto where = "pins[" + std::to_string(k) + "]";
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number_unsigned() || !entry[1].is_number_unsigned())
            throw std::invalid_argument(where + ": expected [site, spin]");
        const auto s = entry[0].get<std::size_t>();
        const auto spin = entry[1].get<std::size_t>();
        if (s >= n_sites)
            throw std::invalid_argument(where + "[0]: site " + std::to_string(s) + " out of range");
        if (spin >= q)
            throw std::invalid_argument(where + "[1]: spin " + std::to_string(spin) + " out of range");
        out[s] = static_cast<Node>(spin);
    }
    return out;
}

nlohmann::json to_json(const PartialMap& pins)
{
    nlohmann::json list = nlohmann::json::array();
    for (std::size_t s = 0; s < pins.size(); ++s)
        if (pins[s])
            list.push_back({s, *pins[s]});
    return {{"pins", list}};
}

// ---------------------------------------------------------------- images

namespace {

struct Rgb {
    std::uint8_t r, g, b;
};

Rgb spin_color(const ConstraintGraph& h, Node spin)
{
    const auto& name = h.label(spin);
    if (name == "green")
        return {40, 170, 60};
    if (name == "yellow")
        return {240, 210, 40};
    if (name == "red")
        return {210, 40, 40};
    if (name == "occupied")
        return {30, 30, 30};
    if (name == "vacant")
        return {255, 255, 255};
    static constexpr Rgb palette[] = {{228, 26, 28},  {55, 126, 184}, {77, 175, 74},  {152, 78, 163},
                                      {255, 127, 0},  {166, 86, 40},  {247, 129, 191}, {153, 153, 153},
                                      {255, 255, 51}, {0, 0, 0}};
    return palette[spin % std::size(palette)];
}

}  // namespace

void render(const Board& g, const ConstraintGraph& h, std::span<const Node> spins, const std::filesystem::path& path,
            const RenderOptions& options)
{
    const auto& geo = g.geometry();
    if (geo.kind != BoardGeometry::Kind::grid || geo.dim < 1 || geo.dim > 2)
        throw std::invalid_argument("render needs a 1- or 2-dimensional grid board");
    if (spins.size() != g.size())
        throw std::invalid_argument("configuration size does not match the board");
    if (options.block == 0)
        throw std::invalid_argument("block size must be positive");
    const bool gray = path.extension() == ".pgm";
    const auto side = static_cast<std::size_t>(2 * geo.half_width + 1);
    const std::size_t width = side * options.block;
    const std::size_t height = (geo.dim == 2 ? side : 1) * options.block;
    const auto occupied = options.occupied ? options.occupied : default_occupied(h);
    const Rgb background{255, 255, 255};

    std::vector<Rgb> pixels(width * height, background);
    for (Site s = 0; s < g.size(); ++s) {
        const Node spin = spins[s];
        Rgb c = background;
        if (options.blank & node_bit(spin))
            c = background;
        else if (options.parity_colors)
            c = (occupied & node_bit(spin)) ? (site_parity(g, s) ? Rgb{40, 80, 200} : Rgb{200, 40, 40}) : background;
        else
            c = spin_color(h, spin);
        const auto col = static_cast<std::size_t>(geo.coords[s][geo.dim == 2 ? 1 : 0] + geo.half_width);
        const auto row = geo.dim == 2 ? static_cast<std::size_t>(geo.coords[s][0] + geo.half_width) : 0;
        for (unsigned dy = 0; dy < options.block; ++dy)
            for (unsigned dx = 0; dx < options.block; ++dx)
                pixels[(row * options.block + dy) * width + col * options.block + dx] = c;
    }

    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << (gray ? "P5\n" : "P6\n") << width << ' ' << height << "\n255\n";
    for (const auto& p : pixels) {
        if (gray) {
            const auto level = static_cast<std::uint8_t>((299 * p.r + 587 * p.g + 114 * p.b) / 1000);
            out.put(static_cast<char>(level));
        } else {
            out.put(static_cast<char>(p.r));
            out.put(static_cast<char>(p.g));
            out.put(static_cast<char>(p.b));
        }
    }
    if (!out)
        throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace homgibbs
