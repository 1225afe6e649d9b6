#include "homgibbs/classify.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace homgibbs {

std::optional<Fold> find_fold(const ConstraintGraph& h, NodeMask alive)
{
    const auto q = static_cast<Node>(h.size());
    for (Node i = 0; i < q; ++i) {
        if (!(alive & node_bit(i)))
            continue;
        const auto ni = h.row(i) & alive;
        for (Node j = 0; j < q; ++j) {
            if (j == i || !(alive & node_bit(j)))
                continue;
            if ((ni & ~h.row(j)) == 0)
                return Fold{i, j};
        }
    }
    return std::nullopt;
}

std::optional<FoldSequence> dismantle(const ConstraintGraph& h)
{
    FoldSequence seq;
    NodeMask alive = h.all_nodes();
    while (std::popcount(alive) > 1) {
        auto fold = find_fold(h, alive);
        if (!fold)
            return std::nullopt;
        seq.steps.push_back(*fold);
        alive &= ~node_bit(fold->folded);
    }
    seq.survivor = static_cast<Node>(std::countr_zero(alive));
    if (!h.looped(seq.survivor))
        return std::nullopt;
    return seq;
}

Node replay_folds(const ConstraintGraph& h, const FoldSequence& seq)
{
    NodeMask alive = h.all_nodes();
    for (const auto& [i, j] : seq.steps) {
        if (i >= h.size() || j >= h.size() || i == j || !(alive & node_bit(i)) || !(alive & node_bit(j)))
            throw std::invalid_argument("fold step refers to a removed or invalid node");
        if ((h.row(i) & alive & ~h.row(j)) != 0)
            throw std::invalid_argument("fold step violates neighbourhood containment");
        alive &= ~node_bit(i);
    }
    if (std::popcount(alive) != 1)
        throw std::invalid_argument("fold sequence does not reduce to a single node");
    const auto survivor = static_cast<Node>(std::countr_zero(alive));
    if (!h.looped(survivor))
        throw std::invalid_argument("fold sequence ends on an unlooped node");
    return survivor;
}

bool cop_win(const ConstraintGraph& h)
{
    if (h.edges().empty() || !is_connected(h))
        throw std::invalid_argument("cop_win needs a connected graph with at least one edge");
    const auto q = h.size();
    // cop_wins[c][r][t]: t = 0 cop to move, t = 1 robber to move. Least fixed
    // point of the cop's attractor to capture.
    std::vector<std::uint8_t> win(q * q * 2, 0);
    auto at = [q](std::size_t c, std::size_t r, std::size_t t) { return (c * q + r) * 2 + t; };
    bool changed = true;
    while (changed) {
        changed = false;
        for (Node c = 0; c < q; ++c)
            for (Node r = 0; r < q; ++r) {
                if (!win[at(c, r, 0)]) {
                    bool w = h.adjacent(c, r);
                    for (auto c2 : h.neighbors(c))
                        w = w || win[at(c2, r, 1)];
                    if (w) {
                        win[at(c, r, 0)] = 1;
                        changed = true;
                    }
                }
                if (!win[at(c, r, 1)]) {
                    bool w = true;
                    for (auto r2 : h.neighbors(r))
                        w = w && win[at(c, r2, 0)];
                    // Every node has a neighbour in a connected graph with an edge,
                    // so the robber always has a move.
                    if (w) {
                        win[at(c, r, 1)] = 1;
                        changed = true;
                    }
                }
            }
    }
    for (Node c = 0; c < q; ++c) {
        bool all = true;
        for (Node r = 0; r < q && all; ++r)
            all = win[at(c, r, 0)] != 0;
        if (all)
            return true;
    }
    return false;
}

FertilityReport fertility(const ConstraintGraph& h)
{
    if (!is_connected(h))
        throw std::invalid_argument("fertility test needs a connected graph");
    FertilityReport rep;
    const auto q = static_cast<Node>(h.size());
    for (Node i = 0; i < q && !rep.unreached_by_loop; ++i) {
        if (!h.looped(i))
            continue;
        for (Node j = 0; j < q; ++j)
            if (j != i && !h.adjacent(i, j)) {
                rep.unreached_by_loop = std::pair{i, j};
                break;
            }
    }
    // Complete multipartite iff non-adjacency (loops ignored) is transitive.
    auto apart = [&](Node a, Node b) { return a == b || !h.adjacent(a, b); };
    for (Node x = 0; x < q && !rep.non_multipartite; ++x)
        for (Node y = 0; y < q && !rep.non_multipartite; ++y) {
            if (y == x || !apart(x, y))
                continue;
            for (Node z = 0; z < q; ++z)
                if (z != x && z != y && apart(y, z) && !apart(x, z)) {
                    rep.non_multipartite = std::array<Node, 3>{x, y, z};
                    break;
                }
        }
    rep.fertile = rep.unreached_by_loop.has_value() || rep.non_multipartite.has_value();
    return rep;
}

std::string FertilityReport::describe(const ConstraintGraph& h) const
{
    std::ostringstream out;
    if (!fertile) {
        out << "sterile: looped nodes are universal and the loop-deleted graph is complete multipartite";
        return out.str();
    }
    if (unreached_by_loop)
        out << "looped node " << h.label(unreached_by_loop->first) << " is not adjacent to "
            << h.label(unreached_by_loop->second);
    if (non_multipartite) {
        if (unreached_by_loop)
            out << "; ";
        const auto& [x, y, z] = *non_multipartite;
        out << "loop-deleted graph not complete multipartite: " << h.label(x) << " !~ " << h.label(y) << ", "
            << h.label(y) << " !~ " << h.label(z) << " but " << h.label(x) << " ~ " << h.label(z);
    }
    return out.str();
}

ClassificationReport classify(const ConstraintGraph& h)
{
    ClassificationReport rep;
    rep.folds = dismantle(h);
    rep.cop_win = cop_win(h);
    rep.fertility = fertility(h);
    return rep;
}

nlohmann::json to_json(const ClassificationReport& report, const ConstraintGraph& h)
{
    nlohmann::json j;
    j["dismantlable"] = report.dismantlable();
    j["fold_sequence"] = nlohmann::json::array();
    if (report.folds) {
        for (const auto& f : report.folds->steps)
            j["fold_sequence"].push_back({{"folded", h.label(f.folded)}, {"into", h.label(f.absorber)}});
        j["survivor"] = h.label(report.folds->survivor);
    }
    j["cop_win"] = report.cop_win;
    j["fertile"] = report.fertility.fertile;
    j["witness"] = report.fertility.describe(h);
    return j;
}

}  // namespace homgibbs
