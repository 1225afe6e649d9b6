#pragma once

#include "homgibbs/graphs.hpp"

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace homgibbs {

/// Fold of `folded` onto `absorber`: N(folded) is contained in N(absorber)
/// within the graph that remains at that step. Indices refer to the original graph.
struct Fold {
    Node folded = 0;
    Node absorber = 0;
    friend bool operator==(const Fold&, const Fold&) = default;
};

struct FoldSequence {
    std::vector<Fold> steps;
    Node survivor = 0;  ///< the single looped node left after all folds
};

/// Lexicographically least fold pair (i, then j) among the nodes in `alive`.
std::optional<Fold> find_fold(const ConstraintGraph& h, NodeMask alive);
inline std::optional<Fold> find_fold(const ConstraintGraph& h) { return find_fold(h, h.all_nodes()); }

/// Greedy dismantling; nullopt when folding gets stuck before one looped node remains.
std::optional<FoldSequence> dismantle(const ConstraintGraph& h);
inline bool is_dismantlable(const ConstraintGraph& h) { return dismantle(h).has_value(); }

/// Re-applies a fold sequence, checking every step. Returns the survivor.
/// Throws std::invalid_argument if a step is not a fold or the survivor is unlooped.
Node replay_folds(const ConstraintGraph& h, const FoldSequence& seq);

/// Exact solution of the cop-and-robber game on h.
///
/// The cop places first, then the robber (possibly on the cop's node); they
/// then alternate, cop first, each moving along an edge of h (a loop lets a
/// player stay put). The cop captures by moving onto the robber's node.
/// Requires h connected with at least one edge; throws std::invalid_argument otherwise.
bool cop_win(const ConstraintGraph& h);

struct FertilityReport {
    bool fertile = false;
    /// Looped node and a node it misses (condition (a) failure).
    std::optional<std::pair<Node, Node>> unreached_by_loop;
    /// x !~ y, y !~ z, x ~ z in the loop-deleted graph (condition (b) failure).
    std::optional<std::array<Node, 3>> non_multipartite;
    std::string describe(const ConstraintGraph& h) const;
};

/// Sterile iff every looped node is adjacent to all others and the loop-deleted
/// graph is complete multipartite. Requires h connected.
FertilityReport fertility(const ConstraintGraph& h);

struct ClassificationReport {
    std::optional<FoldSequence> folds;
    bool cop_win = false;
    FertilityReport fertility;
    bool dismantlable() const { return folds.has_value(); }
};

ClassificationReport classify(const ConstraintGraph& h);
nlohmann::json to_json(const ClassificationReport& report, const ConstraintGraph& h);

}  // namespace homgibbs
