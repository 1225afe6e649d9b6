#include "homgibbs/treegibbs.hpp"

#include "homgibbs/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace homgibbs {

namespace {

template <class T>
std::vector<T> z_sums(const ConstraintGraph& h, std::span<const T> w)
{
    if (w.size() != h.size())
        throw std::invalid_argument("weight vector has " + std::to_string(w.size()) + " entries, expected " +
                                    std::to_string(h.size()));
    std::vector<T> z(h.size(), T(0));
    for (Node i = 0; i < h.size(); ++i) {
        if (!(w[i] > 0))
            throw std::invalid_argument("weights must be positive");
        for (auto j : h.neighbors(i))
            z[i] += w[j];
    }
    return z;
}

void require_no_isolated(const ConstraintGraph& h)
{
    for (Node i = 0; i < h.size(); ++i)
        if (h.neighbors(i).empty())
            throw std::invalid_argument("isolated node " + h.label(i) + " has no neighbours");
}

}  // namespace

std::vector<double> neighbor_weight_sums(const ConstraintGraph& h, std::span<const double> w)
{
    return z_sums(h, w);
}

std::vector<Rational> neighbor_weight_sums(const ConstraintGraph& h, std::span<const Rational> w)
{
    return z_sums(h, w);
}

Activities weights_to_activities(const ConstraintGraph& h, unsigned r, std::span<const double> w)
{
    if (r == 0)
        throw std::invalid_argument("branching factor r must be at least 1");
    require_no_isolated(h);
    const auto z = z_sums(h, w);
    Activities out;
    double total = 0;
    for (Node i = 0; i < h.size(); ++i) {
        out.raw.push_back(w[i] / std::pow(z[i], static_cast<double>(r)));
        total += out.raw.back();
    }
    for (auto x : out.raw)
        out.normalized.push_back(x / total);
    return out;
}

std::vector<Rational> weights_to_activities(const ConstraintGraph& h, unsigned r, std::span<const Rational> w)
{
    if (r == 0)
        throw std::invalid_argument("branching factor r must be at least 1");
    require_no_isolated(h);
    const auto z = z_sums(h, w);
    std::vector<Rational> out;
    for (Node i = 0; i < h.size(); ++i)
        out.push_back(w[i] / pow(z[i], r));
    return out;
}

// ---------------------------------------------------------------- walks

BranchingWalk::BranchingWalk(ConstraintGraph h, unsigned r, std::vector<double> w)
    : h_(std::move(h)), r_(r), w_(std::move(w))
{
    if (r_ == 0)
        throw std::invalid_argument("branching factor r must be at least 1");
    require_no_isolated(h_);
    z_ = z_sums(h_, std::span<const double>(w_));
    double total = 0;
    for (Node i = 0; i < h_.size(); ++i) {
        pi_.push_back(w_[i] * z_[i]);
        total += pi_.back();
    }
    for (auto& p : pi_)
        p /= total;
}

ExactWalk exact_walk(const ConstraintGraph& h, std::span<const Rational> w)
{
    require_no_isolated(h);
    ExactWalk out;
    out.w.assign(w.begin(), w.end());
    out.z = z_sums(h, w);
    Rational total = 0;
    for (Node i = 0; i < h.size(); ++i) {
        out.stationary.push_back(out.w[i] * out.z[i]);
        total += out.stationary.back();
    }
    for (auto& p : out.stationary)
        p /= total;
    return out;
}

TreeConfig sample_branching_walk(const BranchingWalk& walk, unsigned depth, std::uint64_t seed)
{
    const auto& h = walk.graph();
    if (!is_connected(h))
        throw std::invalid_argument("branching walk sampling needs a connected constraint graph");
    if (is_bipartite(h))
        throw std::invalid_argument(
            "constraint graph is bipartite: the walk has no unique stationary law; sample on the double 2H instead");
    TreeConfig out;
    out.tree = tree_board(walk.branching(), depth);
    out.spins.assign(out.tree.size(), 0);
    out.root_source = TreeConfig::RootSource::sampled;

    const auto q = h.size();
    std::vector<double> cumulative(q * q, 0.0);
    for (Node i = 0; i < q; ++i) {
        double acc = 0;
        for (Node j = 0; j < q; ++j) {
            acc += walk.transition(i, j);
            cumulative[i * q + j] = acc;
        }
    }
    auto draw = [q](std::span<const double> cdf, double u) {
        for (Node j = 0; j < q; ++j)
            if (u < cdf[j])
                return j;
        // Rounding can leave the last cumulative entry just below 1.
        Node last = 0;
        for (Node j = 0; j < q; ++j)
            if (j == 0 || cdf[j] > cdf[j - 1])
                last = j;
        return last;
    };
    std::vector<double> root_cdf(q);
    std::partial_sum(walk.stationary().begin(), walk.stationary().end(), root_cdf.begin());

    Rng rng(seed);
    const auto& geo = out.tree.geometry();
    out.spins[0] = draw(root_cdf, rng.uniform());
    for (Site s = 1; s < out.tree.size(); ++s) {
        const auto parent_spin = out.spins[geo.parent[s]];
        out.spins[s] = draw(std::span<const double>(cumulative).subspan(parent_spin * q, q), rng.uniform());
    }
    return out;
}

ConditionalLaw conditional_spin_check(const ConstraintGraph& h, unsigned r, std::span<const Rational> w,
                                      std::span<const Node> neighbor_spins)
{
    if (neighbor_spins.size() != r + 1)
        throw std::invalid_argument("a site of T^r has r + 1 neighbours");
    for (auto s : neighbor_spins)
        if (s >= h.size())
            throw std::invalid_argument("neighbour spin out of range");
    const auto walk = exact_walk(h, w);
    const auto lambda = weights_to_activities(h, r, w);
    const auto q = h.size();
    ConditionalLaw out;
    out.walk.assign(q, Rational(0));
    out.gibbs.assign(q, Rational(0));
    Rational walk_total = 0;
    Rational gibbs_total = 0;
    const auto parent = neighbor_spins[0];
    for (Node s = 0; s < q; ++s) {
        bool legal = true;
        for (auto t : neighbor_spins)
            legal = legal && h.adjacent(s, t);
        if (!legal)
            continue;
        // Root the walk at the first neighbour: it steps to s, whose r
        // children then land on the remaining neighbour spins.
        Rational p = walk.transition(h, parent, s);
        for (std::size_t k = 1; k < neighbor_spins.size(); ++k)
            p *= walk.transition(h, s, neighbor_spins[k]);
        out.walk[s] = p;
        walk_total += p;
        out.gibbs[s] = lambda[s];
        gibbs_total += lambda[s];
    }
    if (walk_total == 0)
        throw std::invalid_argument("neighbour context has probability zero");
    for (Node s = 0; s < q; ++s) {
        out.walk[s] /= walk_total;
        out.gibbs[s] /= gibbs_total;
    }
    return out;
}

// ---------------------------------------------------------------- 2H

DoubleCheck semi_invariant_from_double(const ConstraintGraph& h, unsigned r, std::span<const double> w2h,
                                       double rel_tol)
{
    const auto q = h.size();
    if (w2h.size() != 2 * q)
        throw std::invalid_argument("weights on 2H need 2q entries");
    const auto doubled = double_graph(h);
    DoubleCheck out;
    out.lambda = weights_to_activities(doubled, r, w2h).normalized;
    auto proportional = [&](std::span<const double> plus, std::span<const double> minus) {
        const double c = minus[0] / plus[0];
        for (std::size_t i = 0; i < q; ++i)
            if (std::abs(minus[i] / plus[i] / c - 1.0) > rel_tol)
                return false;
        return true;
    };
    std::span<const double> lam(out.lambda);
    out.lambda_proportional = proportional(lam.first(q), lam.subspan(q));
    out.weights_proportional = proportional(w2h.first(q), w2h.subspan(q));
    return out;
}

// ---------------------------------------------------------------- frozen colourings

TreeConfig frozen_coloring(unsigned r, std::size_t q, unsigned depth, std::uint64_t seed)
{
    if (r == 0)
        throw std::invalid_argument("branching factor r must be at least 1");
    if (q != r + 1)
        throw std::invalid_argument("frozen colourings are built for q = r + 1 only");
    TreeConfig out;
    out.tree = tree_board(r, depth);
    out.spins.assign(out.tree.size(), 0);
    out.root_source = TreeConfig::RootSource::constructed;
    Rng rng(seed, 0xF0F0);
    const auto& geo = out.tree.geometry();
    out.spins[0] = static_cast<Node>(rng.below(q));

    // children[s] are contiguous in breadth-first order; walk parents in order.
    std::vector<Node> palette;
    Site next_child = 1;
    for (Site s = 0; s < out.tree.size() && next_child < out.tree.size(); ++s) {
        if (geo.depth[s] == depth)
            break;
        const unsigned kids = s == 0 ? r + 1 : r;
        palette.clear();
        for (Node c = 0; c < q; ++c)
            if (c != out.spins[s])
                palette.push_back(c);
        if (s == 0)
            palette.push_back(palette[rng.below(palette.size())]);
        // Fisher-Yates with the counter-based generator.
        for (std::size_t k = palette.size(); k > 1; --k)
            std::swap(palette[k - 1], palette[rng.below(k)]);
        for (unsigned c = 0; c < kids; ++c)
            out.spins[next_child++] = palette[c];
    }
    return out;
}

LongRangeReport long_range_action_probe(const ConstraintGraph& h, unsigned r, unsigned depth, const TreeConfig& phi)
{
    const auto& geo = phi.tree.geometry();
    if (geo.kind != BoardGeometry::Kind::tree || geo.branching != r)
        throw std::invalid_argument("phi must colour a tree board with branching factor r");
    if (!is_homomorphism(phi.tree, h, phi.spins))
        throw std::invalid_argument("phi is not a homomorphism into H");
    const auto max_depth = geo.depth.empty() ? 0U : geo.depth.back();
    if (depth > max_depth)
        throw std::invalid_argument("phi is defined only up to depth " + std::to_string(max_depth));
    LongRangeReport out;
    out.excluded_at_every_depth = h.all_nodes();
    for (unsigned n = 1; n <= depth; ++n) {
        const auto ball = tree_board(r, n);
        PartialMap pins(ball.size());
        for (Site s = 0; s < ball.size(); ++s)
            if (ball.geometry().depth[s] == n)
                pins[s] = phi.spins[s];
        const auto achievable = tree_feasible_spins(ball, h, pins, 0);
        out.achievable.push_back(achievable);
        out.excluded_at_every_depth &= ~achievable;
    }
    if (depth == 0)
        out.excluded_at_every_depth = 0;
    return out;
}

LongRangeReport long_range_action_probe(const ConstraintGraph& h, unsigned r, unsigned depth)
{
    if (!(h == complete_graph(r + 1)))
        throw std::invalid_argument("no default candidate map: supply phi unless H is K_{r+1}");
    return long_range_action_probe(h, r, depth, frozen_coloring(r, r + 1, depth, 0));
}

nlohmann::json to_json(const TreeConfig& config, const ConstraintGraph& h)
{
    nlohmann::json j;
    const auto& geo = config.tree.geometry();
    j["branching"] = geo.branching;
    j["depth"] = geo.depth.empty() ? 0 : geo.depth.back();
    j["root_source"] = config.root_source == TreeConfig::RootSource::sampled       ? "sampled"
                       : config.root_source == TreeConfig::RootSource::conditioned ? "conditioned"
                                                                                   : "constructed";
    j["parent"] = geo.parent;
    j["spins"] = config.spins;
    nlohmann::json labels = nlohmann::json::array();
    for (auto s : config.spins)
        labels.push_back(h.label(s));
    j["spin_labels"] = labels;
    return j;
}

}  // namespace homgibbs
