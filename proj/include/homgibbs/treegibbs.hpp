#pragma once

#include "homgibbs/graphs.hpp"
#include "homgibbs/homspace.hpp"
#include "homgibbs/rational.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace homgibbs {

// ---------------------------------------------------------------- weights and activities

/// z_i = sum of w_j over the neighbours j of i (i itself counts when looped).
std::vector<double> neighbor_weight_sums(const ConstraintGraph& h, std::span<const double> w);
std::vector<Rational> neighbor_weight_sums(const ConstraintGraph& h, std::span<const Rational> w);

struct Activities {
    std::vector<double> raw;         ///< w_i / z_i^r
    std::vector<double> normalized;  ///< raw scaled to sum 1
};

/// Activity vector of the r-branching w-random walk. Throws std::invalid_argument
/// for non-positive weights, r == 0 or a node without neighbours.
Activities weights_to_activities(const ConstraintGraph& h, unsigned r, std::span<const double> w);
std::vector<Rational> weights_to_activities(const ConstraintGraph& h, unsigned r, std::span<const Rational> w);

// ---------------------------------------------------------------- branching random walk

/// Node-weighted random walk on H: step i -> j with probability w_j / z_i,
/// stationary law proportional to w_i z_i.
class BranchingWalk {
public:
    BranchingWalk(ConstraintGraph h, unsigned r, std::vector<double> w);

    const ConstraintGraph& graph() const { return h_; }
    unsigned branching() const { return r_; }
    const std::vector<double>& weights() const { return w_; }
    const std::vector<double>& z() const { return z_; }
    const std::vector<double>& stationary() const { return pi_; }
    double transition(Node i, Node j) const { return h_.adjacent(i, j) ? w_[j] / z_[i] : 0.0; }
    Activities activities() const { return weights_to_activities(h_, r_, w_); }

private:
    ConstraintGraph h_;
    unsigned r_;
    std::vector<double> w_;
    std::vector<double> z_;
    std::vector<double> pi_;
};

/// Exact counterpart of BranchingWalk's derived quantities.
struct ExactWalk {
    std::vector<Rational> w;
    std::vector<Rational> z;
    std::vector<Rational> stationary;
    Rational transition(const ConstraintGraph& h, Node i, Node j) const
    {
        return h.adjacent(i, j) ? Rational(w[j] / z[i]) : Rational(0);
    }
};
ExactWalk exact_walk(const ConstraintGraph& h, std::span<const Rational> w);

struct TreeConfig {
    enum class RootSource { sampled, conditioned, constructed };
    Board tree;
    HomMap spins;
    RootSource root_source = RootSource::sampled;
};

/// Colours tree_board(r, depth): root ~ stationary law, each child of a site
/// with spin i drawn from row i of the transition matrix. Throws for
/// disconnected or bipartite H (use the double 2H for those).
TreeConfig sample_branching_walk(const BranchingWalk& walk, unsigned depth, std::uint64_t seed);

struct ConditionalLaw {
    std::vector<Rational> walk;   ///< from the branching walk
    std::vector<Rational> gibbs;  ///< lambda restricted to legal spins
};

/// Law of a site's spin given the spins of its r + 1 neighbours, computed from
/// the walk rooted at the first neighbour and from the activity vector.
/// Throws std::invalid_argument when no spin is compatible with the context.
ConditionalLaw conditional_spin_check(const ConstraintGraph& h, unsigned r, std::span<const Rational> w,
                                      std::span<const Node> neighbor_spins);

// ---------------------------------------------------------------- fundamental equations

struct SolveOptions {
    unsigned starts = 200;
    double tol = 1e-10;          ///< residual accepted as a solution
    unsigned max_iter = 2000;    ///< fixed-point sweeps per start
    unsigned newton_iter = 100;  ///< damped Newton steps per candidate
    double dedup_tol = 1e-6;     ///< max-norm distance in normalised (u, v) coordinates
    bool invariant_only = false;
    std::uint64_t seed = 0x5EED;
    unsigned threads = 0;
};

/// One solution of lambda_i = u_i / (sum_{j~i} v_j)^r = v_i / (sum_{j~i} u_j)^r,
/// normalised so that sum(u) + sum(v) = 2.
struct GibbsSolution {
    std::vector<double> u;
    std::vector<double> v;
    std::vector<double> lambda_out;  ///< activities the solution induces, scaled to sum 1
    double residual = 0.0;           ///< max |log| mismatch of the equations
    bool invariant = false;
    /// For non-invariant solutions: whether the swapped pair (v, u) was also reached.
    bool mirror_found = false;
};

struct SolveResult {
    std::vector<double> lambda;  ///< normalised input activities
    unsigned r = 0;
    std::vector<GibbsSolution> solutions;  ///< one per class up to (u, v) <-> (v, u)
    std::size_t candidates = 0;            ///< converged runs before deduplication
    /// Extremal stationary laws on the positive nodes of 2H: 1 for connected
    /// non-bipartite H, 2 for connected bipartite H.
    std::size_t double_components = 1;
    /// Classes after also identifying solutions related by automorphisms of H fixing lambda.
    std::size_t symmetry_classes = 0;

    std::size_t invariant_count() const;
    std::size_t semi_invariant_count() const { return solutions.size() - invariant_count(); }
    /// Simple semi-invariant Gibbs measures found: each class contributes one
    /// measure per extremal stationary law of 2H.
    std::size_t measure_count() const { return solutions.size() * double_components; }
};

/// Multi-start solve. Each start runs damped Newton directly and also after
/// alternating fixed-point iteration; converged candidates are polished in
/// quad precision and deduplicated. Requires H connected, r >= 1 and lambda
/// positive; throws std::runtime_error if no start converges.
SolveResult solve_fundamental(const ConstraintGraph& h, unsigned r, std::span<const double> lambda,
                              const SolveOptions& options = {});

nlohmann::json to_json(const SolveResult& result);

// ---------------------------------------------------------------- transitions along a family

enum class CountKind { invariant, all_classes, measures };

struct LambdaFamily {
    std::string name;
    std::function<std::vector<double>(double)> at;
};

/// lambda = (t, 1, t) on the hinge.
LambdaFamily hinge_family();
/// lambda = (t, 1) on the hard-core graph (occupied, vacant).
LambdaFamily hard_core_family();
/// lambda = (t, 1, ..., 1) on K_q.
LambdaFamily complete_ray_family(std::size_t q);

struct TransitionReport {
    struct Sample {
        double t;
        std::size_t count;
    };
    struct Bracket {
        double lo, hi;
        std::size_t count_lo, count_hi;
    };
    std::vector<Sample> samples;
    std::vector<Bracket> brackets;
};

/// Solution counts over the grid `ts`, with every count change bisected until
/// the bracket is narrower than `bracket_tol`.
TransitionReport count_transition(const ConstraintGraph& h, unsigned r, const LambdaFamily& family,
                                  std::span<const double> ts, CountKind kind, const SolveOptions& options = {},
                                  double bracket_tol = 1e-6);

// ---------------------------------------------------------------- semi-invariant measures via 2H

struct DoubleCheck {
    std::vector<double> lambda;  ///< activities on 2H (2q entries, scaled to sum 1)
    bool lambda_proportional = false;   ///< lambda_{-i} proportional to lambda_i
    bool weights_proportional = false;  ///< w_{-i} proportional to w_i
    /// A valid simple semi-invariant measure on hom(T^r, H) that is not invariant.
    bool semi_invariant_only() const { return lambda_proportional && !weights_proportional; }
};

/// w2h holds +i weights at [0, q) and -i weights at [q, 2q).
DoubleCheck semi_invariant_from_double(const ConstraintGraph& h, unsigned r, std::span<const double> w2h,
                                       double rel_tol = 1e-8);

// ---------------------------------------------------------------- frozen colourings and long range action

/// Rigid (r + 1)-colouring of tree_board(r, depth): the neighbours of every
/// site other than the root show all colours except its own, the root's
/// children repeat one seeded colour. Throws unless q == r + 1.
TreeConfig frozen_coloring(unsigned r, std::size_t q, unsigned depth, std::uint64_t seed);

struct LongRangeReport {
    /// achievable[n - 1]: root spins of maps agreeing with phi on the sphere of radius n.
    std::vector<NodeMask> achievable;
    NodeMask excluded_at_every_depth = 0;
    bool long_range_action() const { return excluded_at_every_depth != 0; }
};

/// Exact feasibility DP for n = 1..depth. phi must colour a tree_board(r, D)
/// with D >= depth. Certifies exclusion up to `depth` only.
LongRangeReport long_range_action_probe(const ConstraintGraph& h, unsigned r, unsigned depth, const TreeConfig& phi);
/// Same, with phi the frozen colouring (seed 0); h must be the complete graph K_{r+1}.
LongRangeReport long_range_action_probe(const ConstraintGraph& h, unsigned r, unsigned depth);

nlohmann::json to_json(const TreeConfig& config, const ConstraintGraph& h);

}  // namespace homgibbs
