// Leaf-to-root message passing on acyclic boards.

#include "homgibbs/homspace.hpp"

#include <bit>
#include <cmath>

namespace homgibbs {

namespace {

struct Rooted {
    std::vector<Site> order;   ///< pre-order from the root
    std::vector<Site> parent;  ///< parent[root] == root
};

Rooted root_component(const Board& g, Site root, std::vector<bool>& seen)
{
    Rooted out;
    out.parent.assign(g.size(), root);
    std::vector<Site> stack{root};
    seen[root] = true;
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        out.order.push_back(s);
        for (auto t : g.neighbors(s)) {
            if (t == out.parent[s] && s != root)
                continue;
            if (seen[t])
                throw std::invalid_argument("tree dynamic programming needs an acyclic board");
            seen[t] = true;
            out.parent[t] = s;
            stack.push_back(t);
        }
    }
    return out;
}

NodeMask allowed_at(const ConstraintGraph& h, const PartialMap& pins, Site s)
{
    if (!pins.empty() && pins[s])
        return node_bit(*pins[s]);
    return h.all_nodes();
}

void validate(const Board& g, const ConstraintGraph& h, const PartialMap& pins)
{
    if (!pins.empty() && pins.size() != g.size())
        throw std::invalid_argument("pin vector length does not match the board");
    for (const auto& p : pins)
        if (p && *p >= h.size())
            throw std::invalid_argument("pinned spin out of range");
}

}  // namespace

std::vector<double> tree_marginal(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                                  const PartialMap& pins, Site target)
{
    validate(g, h, pins);
    if (lambda.size() != h.size())
        throw std::invalid_argument("activity vector length does not match the constraint graph");
    if (target >= g.size())
        throw std::invalid_argument("target site out of range");
    const auto q = h.size();
    std::vector<bool> seen(g.size(), false);
    const auto rooted = root_component(g, target, seen);

    // belief[s * q + t]: normalised weight of spin t at s from the subtree below s.
    std::vector<double> belief(g.size() * q, 0.0);
    std::vector<double> incoming(q);
    for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
        const auto s = *it;
        const auto allowed = allowed_at(h, pins, s);
        double* bs = &belief[s * q];
        for (Node t = 0; t < q; ++t)
            bs[t] = (allowed & node_bit(t)) ? lambda[t] : 0.0;
        for (auto c : g.neighbors(s)) {
            if (c == rooted.parent[s] && s != target)
                continue;
            const double* bc = &belief[c * q];
            for (Node t = 0; t < q; ++t) {
                if (bs[t] == 0.0)
                    continue;
                double acc = 0;
                for (auto u : h.neighbors(t))
                    acc += bc[u];
                bs[t] *= acc;
            }
        }
        double total = 0;
        for (Node t = 0; t < q; ++t)
            total += bs[t];
        if (!(total > 0))
            throw std::invalid_argument("boundary assignment admits no homomorphism");
        for (Node t = 0; t < q; ++t)
            bs[t] /= total;
    }
    return {belief.begin() + target * q, belief.begin() + (target + 1) * q};
}

BigInt tree_extension_count(const Board& g, const ConstraintGraph& h, const PartialMap& pins)
{
    validate(g, h, pins);
    const auto q = h.size();
    std::vector<bool> seen(g.size(), false);
    std::vector<BigInt> ways(g.size() * q);
    BigInt total = 1;
    for (Site root = 0; root < g.size(); ++root) {
        if (seen[root])
            continue;
        const auto rooted = root_component(g, root, seen);
        for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
            const auto s = *it;
            const auto allowed = allowed_at(h, pins, s);
            for (Node t = 0; t < q; ++t)
                ways[s * q + t] = (allowed & node_bit(t)) ? 1 : 0;
            for (auto c : g.neighbors(s)) {
                if (c == rooted.parent[s] && s != root)
                    continue;
                for (Node t = 0; t < q; ++t) {
                    if (ways[s * q + t] == 0)
                        continue;
                    BigInt acc = 0;
                    for (auto u : h.neighbors(t))
                        acc += ways[c * q + u];
                    ways[s * q + t] *= acc;
                }
            }
        }
        BigInt component = 0;
        for (Node t = 0; t < q; ++t)
            component += ways[root * q + t];
        total *= component;
    }
    return total;
}

NodeMask tree_feasible_spins(const Board& g, const ConstraintGraph& h, const PartialMap& pins, Site target)
{
    validate(g, h, pins);
    if (target >= g.size())
        throw std::invalid_argument("target site out of range");
    std::vector<bool> seen(g.size(), false);
    const auto rooted = root_component(g, target, seen);
    std::vector<NodeMask> feasible(g.size(), 0);
    for (auto it = rooted.order.rbegin(); it != rooted.order.rend(); ++it) {
        const auto s = *it;
        auto mask = allowed_at(h, pins, s);
        for (auto c : g.neighbors(s)) {
            if (c == rooted.parent[s] && s != target)
                continue;
            NodeMask keep = 0;
            for (auto rest = mask; rest; rest &= rest - 1) {
                const auto t = static_cast<Node>(std::countr_zero(rest));
                if (h.row(t) & feasible[c])
                    keep |= node_bit(t);
            }
            mask = keep;
        }
        feasible[s] = mask;
    }
    return feasible[target];
}

}  // namespace homgibbs
