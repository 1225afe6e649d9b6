#include "homgibbs/homspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <queue>

#include <boost/pending/disjoint_sets.hpp>

namespace homgibbs {

namespace {

std::vector<Site> bfs_order(const Board& g)
{
    std::vector<Site> order;
    order.reserve(g.size());
    std::vector<bool> seen(g.size(), false);
    std::queue<Site> todo;
    for (Site start = 0; start < g.size(); ++start) {
        if (seen[start])
            continue;
        seen[start] = true;
        todo.push(start);
        while (!todo.empty()) {
            auto s = todo.front();
            todo.pop();
            order.push_back(s);
            for (auto t : g.neighbors(s))
                if (!seen[t]) {
                    seen[t] = true;
                    todo.push(t);
                }
        }
    }
    return order;
}

void check_pins(const Board& g, const ConstraintGraph& h, const PartialMap& pins)
{
    if (pins.empty())
        return;
    if (pins.size() != g.size())
        throw std::invalid_argument("pin vector length does not match the board");
    for (const auto& p : pins)
        if (p && *p >= h.size())
            throw std::invalid_argument("pinned spin out of range");
}

void check_activities(std::size_t q, std::size_t given)
{
    if (given != q)
        throw std::invalid_argument("activity vector has " + std::to_string(given) + " entries, expected " +
                                    std::to_string(q));
}

}  // namespace

bool is_homomorphism(const Board& g, const ConstraintGraph& h, std::span<const Node> spins)
{
    if (spins.size() != g.size())
        return false;
    for (auto s : spins)
        if (s >= h.size())
            return false;
    for (const auto& e : g.edges())
        if (!h.adjacent(spins[e.a], spins[e.b]))
            return false;
    return true;
}

NodeMask legal_spins(const Board& g, const ConstraintGraph& h, std::span<const Node> spins, Site s)
{
    NodeMask legal = h.all_nodes();
    for (auto t : g.neighbors(s))
        legal &= h.row(spins[t]);
    return legal;
}

bool is_isolated(const Board& g, const ConstraintGraph& h, std::span<const Node> spins)
{
    for (Site s = 0; s < g.size(); ++s)
        if (legal_spins(g, h, spins, s) & ~node_bit(spins[s]))
            return false;
    return true;
}

// ---------------------------------------------------------------- HomSpace

HomMap HomSpace::map_as_vector(std::size_t k) const
{
    auto m = map(k);
    return HomMap(m.begin(), m.end());
}

std::optional<std::size_t> HomSpace::find(std::span<const std::uint8_t> spins) const
{
    if (spins.size() != sites())
        return std::nullopt;
    auto it = index_.find(std::string_view(reinterpret_cast<const char*>(spins.data()), spins.size()));
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::size_t> HomSpace::find(std::span<const Node> spins) const
{
    std::vector<std::uint8_t> bytes(spins.size());
    for (std::size_t s = 0; s < spins.size(); ++s) {
        if (spins[s] >= graph_.size())
            return std::nullopt;
        bytes[s] = static_cast<std::uint8_t>(spins[s]);
    }
    return find(bytes);
}

void HomSpace::build_index()
{
    index_.clear();
    index_.reserve(count_);
    for (std::size_t k = 0; k < count_; ++k) {
        auto m = map(k);
        index_.emplace(std::string_view(reinterpret_cast<const char*>(m.data()), m.size()),
                       static_cast<std::uint32_t>(k));
    }
}

void HomSpace::build_flip_graph()
{
    flip_offsets_.assign(count_ + 1, 0);
    flip_targets_.clear();
    std::vector<std::uint8_t> scratch(sites());
    std::vector<Node> spins(sites());
    for (std::size_t k = 0; k < count_; ++k) {
        auto m = map(k);
        std::copy(m.begin(), m.end(), scratch.begin());
        std::copy(m.begin(), m.end(), spins.begin());
        for (Site s = 0; s < sites(); ++s) {
            auto legal = legal_spins(board_, graph_, spins, s) & ~node_bit(spins[s]);
            while (legal) {
                const auto t = static_cast<std::uint8_t>(std::countr_zero(legal));
                legal &= legal - 1;
                scratch[s] = t;
                auto other = find(std::span<const std::uint8_t>(scratch));
                // Unpinned single-site changes that stay legal are always in the space;
                // pinned sites have no alternatives in the space and are skipped.
                if (other)
                    flip_targets_.push_back(static_cast<std::uint32_t>(*other));
            }
            scratch[s] = m[s];
        }
        flip_offsets_[k + 1] = flip_targets_.size();
    }
}

HomSpace enumerate(const Board& g, const ConstraintGraph& h, const EnumerationLimits& limits, const PartialMap& pins)
{
    check_pins(g, h, pins);
    HomSpace hs;
    hs.board_ = g;
    hs.graph_ = h;
    const auto n = g.size();
    if (n == 0) {
        hs.count_ = 1;
        hs.build_index();
        if (limits.build_flip_graph)
            hs.build_flip_graph();
        return hs;
    }

    const auto order = bfs_order(g);
    std::vector<NodeMask> domain(n, h.all_nodes());
    for (Site s = 0; s < n; ++s)
        if (!pins.empty() && pins[s])
            domain[s] = node_bit(*pins[s]);
    std::vector<std::uint8_t> current(n, 0);
    std::vector<bool> assigned(n, false);

    // Explicit-stack backtracking. trail holds (site, previous domain) pairs to undo.
    struct Frame {
        NodeMask remaining;
        std::size_t trail_mark;
    };
    std::vector<Frame> frames;
    std::vector<std::pair<Site, NodeMask>> trail;
    std::uint64_t search_nodes = 0;

    std::size_t depth = 0;
    frames.push_back({domain[order[0]], 0});
    while (true) {
        auto& frame = frames[depth];
        const auto s = order[depth];
        // Undo the previous choice at this depth.
        while (trail.size() > frame.trail_mark) {
            domain[trail.back().first] = trail.back().second;
            trail.pop_back();
        }
        if (frame.remaining == 0) {
            assigned[s] = false;
            if (depth == 0)
                break;
            frames.pop_back();
            --depth;
            continue;
        }
        if (++search_nodes > limits.max_search_nodes)
            throw EnumerationCapExceeded("homomorphism search exceeded " + std::to_string(limits.max_search_nodes) +
                                         " search nodes");
        const auto spin = static_cast<Node>(std::countr_zero(frame.remaining));
        frame.remaining &= frame.remaining - 1;
        current[s] = static_cast<std::uint8_t>(spin);
        assigned[s] = true;
        bool ok = true;
        for (auto t : g.neighbors(s)) {
            if (assigned[t])
                continue;
            const auto narrowed = domain[t] & h.row(spin);
            if (narrowed != domain[t]) {
                trail.emplace_back(t, domain[t]);
                domain[t] = narrowed;
            }
            if (narrowed == 0) {
                ok = false;
                break;
            }
        }
        if (!ok)
            continue;
        if (depth + 1 == n) {
            if (hs.count_ >= limits.max_maps)
                throw EnumerationCapExceeded("homomorphism count exceeds " + std::to_string(limits.max_maps));
            hs.spins_.insert(hs.spins_.end(), current.begin(), current.end());
            ++hs.count_;
            continue;
        }
        ++depth;
        frames.push_back({domain[order[depth]], trail.size()});
    }
    hs.build_index();
    if (limits.build_flip_graph)
        hs.build_flip_graph();
    return hs;
}

// ---------------------------------------------------------------- queries

Connectivity connectivity(const HomSpace& hs)
{
    if (!hs.has_flip_graph())
        throw std::invalid_argument("connectivity needs the flip graph");
    Connectivity c;
    c.empty = hs.empty();
    const auto n = hs.size();
    std::vector<std::size_t> rank(n, 0);
    std::vector<std::size_t> parent(n);
    boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());
    for (std::size_t k = 0; k < n; ++k)
        sets.make_set(k);
    for (std::size_t k = 0; k < n; ++k)
        for (auto other : hs.flip_neighbors(k))
            if (other > k)
                sets.union_set(k, static_cast<std::size_t>(other));
    c.component_of.resize(n);
    std::vector<std::uint32_t> label(n, UINT32_MAX);
    for (std::size_t k = 0; k < n; ++k) {
        auto root = sets.find_set(k);
        if (label[root] == UINT32_MAX)
            label[root] = static_cast<std::uint32_t>(c.component_count++);
        c.component_of[k] = label[root];
    }
    c.connected = c.component_count <= 1;
    return c;
}

std::vector<std::size_t> isolated_maps(const HomSpace& hs)
{
    if (!hs.has_flip_graph())
        throw std::invalid_argument("isolated_maps needs the flip graph");
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < hs.size(); ++k)
        if (hs.flip_neighbors(k).empty())
            out.push_back(k);
    return out;
}

std::vector<Rational> lambda_measure(const HomSpace& hs, std::span<const Rational> lambda)
{
    check_activities(hs.graph().size(), lambda.size());
    if (hs.empty())
        throw std::invalid_argument("lambda measure of an empty homomorphism space");
    for (const auto& l : lambda)
        if (l <= 0)
            throw std::invalid_argument("activities must be positive");
    std::vector<Rational> weight(hs.size());
    std::vector<unsigned> counts(hs.graph().size());
    Rational total = 0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        std::fill(counts.begin(), counts.end(), 0U);
        for (auto s : hs.map(k))
            ++counts[s];
        Rational w = 1;
        for (Node i = 0; i < counts.size(); ++i)
            if (counts[i])
                w *= pow(lambda[i], counts[i]);
        total += w;
        weight[k] = std::move(w);
    }
    for (auto& w : weight)
        w /= total;
    return weight;
}

std::vector<double> lambda_measure(const HomSpace& hs, std::span<const double> lambda)
{
    check_activities(hs.graph().size(), lambda.size());
    if (hs.empty())
        throw std::invalid_argument("lambda measure of an empty homomorphism space");
    std::vector<double> log_lambda;
    for (auto l : lambda) {
        if (!(l > 0))
            throw std::invalid_argument("activities must be positive");
        log_lambda.push_back(std::log(l));
    }
    std::vector<double> logw(hs.size());
    for (std::size_t k = 0; k < hs.size(); ++k) {
        double acc = 0;
        for (auto s : hs.map(k))
            acc += log_lambda[s];
        logw[k] = acc;
    }
    const double top = *std::max_element(logw.begin(), logw.end());
    double total = 0;
    for (auto& x : logw) {
        x = std::exp(x - top);
        total += x;
    }
    for (auto& x : logw)
        x /= total;
    return logw;
}

GibbsCheck check_one_site_gibbs(const HomSpace& hs, std::span<const double> lambda, std::span<const double> mu)
{
    check_activities(hs.graph().size(), lambda.size());
    if (mu.size() != hs.size())
        throw std::invalid_argument("measure length does not match the space");
    GibbsCheck out;
    const auto& g = hs.board();
    const auto& h = hs.graph();
    std::vector<Node> spins(hs.sites());
    std::vector<std::uint8_t> scratch(hs.sites());
    for (std::size_t k = 0; k < hs.size(); ++k) {
        if (mu[k] <= 0)
            continue;
        auto m = hs.map(k);
        std::copy(m.begin(), m.end(), spins.begin());
        std::copy(m.begin(), m.end(), scratch.begin());
        for (Site s = 0; s < hs.sites(); ++s) {
            const auto legal = legal_spins(g, h, spins, s);
            double mass = 0;
            double lam_total = 0;
            std::vector<std::pair<Node, double>> entries;
            for (auto rest = legal; rest; rest &= rest - 1) {
                const auto t = static_cast<Node>(std::countr_zero(rest));
                scratch[s] = static_cast<std::uint8_t>(t);
                auto other = hs.find(std::span<const std::uint8_t>(scratch));
                const double p = other ? mu[*other] : 0.0;
                entries.emplace_back(t, p);
                mass += p;
                lam_total += lambda[t];
            }
            scratch[s] = m[s];
            for (const auto& [t, p] : entries) {
                const double violation = std::abs(p / mass - lambda[t] / lam_total);
                if (violation > out.max_violation) {
                    out.max_violation = violation;
                    out.worst_map = k;
                    out.worst_site = s;
                }
            }
        }
    }
    return out;
}

std::vector<double> site_marginal(const HomSpace& hs, std::span<const double> mu, Site site)
{
    if (mu.size() != hs.size())
        throw std::invalid_argument("measure length does not match the space");
    if (site >= hs.sites())
        throw std::invalid_argument("site out of range");
    std::vector<double> law(hs.graph().size(), 0.0);
    for (std::size_t k = 0; k < hs.size(); ++k)
        law[hs.spin(k, site)] += mu[k];
    return law;
}

std::vector<double> boundary_influence(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                                       const PartialMap& boundary, Site target, InfluenceMethod method,
                                       const EnumerationLimits& limits)
{
    check_activities(h.size(), lambda.size());
    if (target >= g.size())
        throw std::invalid_argument("target site out of range");
    if (method == InfluenceMethod::automatic)
        method = is_forest(g) ? InfluenceMethod::tree_dp : InfluenceMethod::enumeration;
    if (method == InfluenceMethod::tree_dp)
        return tree_marginal(g, h, lambda, boundary, target);
    auto lim = limits;
    lim.build_flip_graph = false;
    auto hs = enumerate(g, h, lim, boundary);
    if (hs.empty())
        throw std::invalid_argument("boundary assignment admits no homomorphism");
    auto mu = lambda_measure(hs, lambda);
    return site_marginal(hs, mu, target);
}

}  // namespace homgibbs

namespace homgibbs {

MixingReport empirical_mixing_distance(const HomSpace& hs)
{
    const auto& g = hs.board();
    const auto n = g.size();
    const auto q = hs.graph().size();
    if (static_cast<double>(hs.size()) * static_cast<double>(n) * static_cast<double>(n) > 2e9)
        throw std::invalid_argument("space too large for the pairwise mixing probe");
    constexpr unsigned unreachable = ~0U;
    std::vector<unsigned> dist(n * n, unreachable);
    for (Site s = 0; s < n; ++s) {
        std::queue<Site> frontier;
        dist[s * n + s] = 0;
        frontier.push(s);
        while (!frontier.empty()) {
            const auto x = frontier.front();
            frontier.pop();
            for (auto y : g.neighbors(x))
                if (dist[s * n + y] == unreachable) {
                    dist[s * n + y] = dist[s * n + x] + 1;
                    frontier.push(y);
                }
        }
    }
    MixingReport out;
    for (auto d : dist)
        if (d != unreachable)
            out.diameter = std::max(out.diameter, d);
    std::vector<NodeMask> support(n, 0);
    for (std::size_t k = 0; k < hs.size(); ++k)
        for (Site s = 0; s < n; ++s)
            support[s] |= node_bit(hs.spin(k, s));
    std::vector<NodeMask> joint(q);
    for (Site u = 0; u < n; ++u)
        for (Site v = u + 1; v < n; ++v) {
            const auto d = dist[u * n + v];
            if (d == unreachable)
                continue;
            std::fill(joint.begin(), joint.end(), 0);
            for (std::size_t k = 0; k < hs.size(); ++k)
                joint[hs.spin(k, u)] |= node_bit(hs.spin(k, v));
            bool blocked = false;
            for (Node a = 0; a < q && !blocked; ++a)
                if (support[u] & node_bit(a))
                    blocked = joint[a] != support[v];
            if (blocked && (!out.max_blocked_distance || d > *out.max_blocked_distance))
                out.max_blocked_distance = d;
        }
    if (!out.max_blocked_distance)
        out.m = 1;
    else if (*out.max_blocked_distance < out.diameter)
        out.m = *out.max_blocked_distance + 1;
    return out;
}

}  // namespace homgibbs
