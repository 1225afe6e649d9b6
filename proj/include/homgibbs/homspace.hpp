#pragma once

#include "homgibbs/graphs.hpp"
#include "homgibbs/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace homgibbs {

/// Spin per site. A valid HomMap sends every board edge to an edge of H.
using HomMap = std::vector<Node>;
/// Spin per site, or nullopt for a free site. Empty means nothing pinned.
using PartialMap = std::vector<std::optional<Node>>;

bool is_homomorphism(const Board& g, const ConstraintGraph& h, std::span<const Node> spins);

/// Spins allowed at site s given the spins of its neighbours in `spins`.
NodeMask legal_spins(const Board& g, const ConstraintGraph& h, std::span<const Node> spins, Site s);

/// Whether no single-site change of `spins` is another homomorphism.
bool is_isolated(const Board& g, const ConstraintGraph& h, std::span<const Node> spins);

struct EnumerationLimits {
    std::uint64_t max_maps = 10'000'000;
    /// Bound on backtracking search nodes.
    std::uint64_t max_search_nodes = 100'000'000;
    bool build_flip_graph = true;
};

class EnumerationCapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// All homomorphisms G -> H (optionally restricted by pins), with the
/// flip graph joining maps that differ at exactly one site.
class HomSpace {
public:
    // The lookup index holds views into the spin buffer, so copies are not allowed.
    HomSpace(const HomSpace&) = delete;
    HomSpace& operator=(const HomSpace&) = delete;
    HomSpace(HomSpace&&) noexcept = default;
    HomSpace& operator=(HomSpace&&) noexcept = default;

    const Board& board() const { return board_; }
    const ConstraintGraph& graph() const { return graph_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    std::size_t sites() const { return board_.size(); }

    /// Spins of map k, one byte per site.
    std::span<const std::uint8_t> map(std::size_t k) const
    {
        return {spins_.data() + k * sites(), sites()};
    }
    HomMap map_as_vector(std::size_t k) const;
    Node spin(std::size_t k, Site s) const { return spins_[k * sites() + s]; }

    std::optional<std::size_t> find(std::span<const std::uint8_t> spins) const;
    std::optional<std::size_t> find(std::span<const Node> spins) const;

    bool has_flip_graph() const { return !flip_offsets_.empty() || count_ == 0; }
    std::span<const std::uint32_t> flip_neighbors(std::size_t k) const
    {
        return {flip_targets_.data() + flip_offsets_[k], flip_targets_.data() + flip_offsets_[k + 1]};
    }
    std::size_t flip_edge_count() const { return flip_targets_.size() / 2; }

private:
    HomSpace() = default;
    friend HomSpace enumerate(const Board&, const ConstraintGraph&, const EnumerationLimits&, const PartialMap&);
    void build_index();
    void build_flip_graph();

    Board board_;
    ConstraintGraph graph_;
    std::size_t count_ = 0;
    std::vector<std::uint8_t> spins_;
    std::unordered_map<std::string_view, std::uint32_t> index_;
    std::vector<std::uint64_t> flip_offsets_;
    std::vector<std::uint32_t> flip_targets_;
};

/// Backtracking with forward checking over sites in breadth-first order.
/// Throws EnumerationCapExceeded when a limit is hit.
HomSpace enumerate(const Board& g, const ConstraintGraph& h, const EnumerationLimits& limits = {},
                   const PartialMap& pins = {});

struct Connectivity {
    bool empty = false;  ///< empty spaces count as connected
    bool connected = true;
    std::size_t component_count = 0;
    std::vector<std::uint32_t> component_of;
};

Connectivity connectivity(const HomSpace& hs);
std::vector<std::size_t> isolated_maps(const HomSpace& hs);

/// Probability of each map proportional to the product of the activities of its spins.
/// Throws std::invalid_argument on an empty space or non-positive activities.
std::vector<Rational> lambda_measure(const HomSpace& hs, std::span<const Rational> lambda);
std::vector<double> lambda_measure(const HomSpace& hs, std::span<const double> lambda);

struct GibbsCheck {
    double max_violation = 0.0;
    std::size_t worst_map = 0;
    Site worst_site = 0;
};

/// Largest deviation, over maps in the support of mu and all sites, between mu's
/// conditional law of a site's spin given the rest and lambda restricted to the
/// legal spins.
GibbsCheck check_one_site_gibbs(const HomSpace& hs, std::span<const double> lambda, std::span<const double> mu);

/// Marginal law of a site's spin under a measure on the space.
std::vector<double> site_marginal(const HomSpace& hs, std::span<const double> mu, Site site);

/// Empirical version of the "distance m" property on one board: pairs of
/// sites u, v are blocked when some spin pair (a, b), each realised on its
/// own, never occurs together. m is one more than the largest blocked
/// distance and is unset if blocking happens at the board's diameter.
struct MixingReport {
    unsigned diameter = 0;
    std::optional<unsigned> max_blocked_distance;
    std::optional<unsigned> m;
};
MixingReport empirical_mixing_distance(const HomSpace& hs);

enum class InfluenceMethod { automatic, enumeration, tree_dp };

/// Law of the target's spin under the lambda-measure conditioned on `boundary`.
/// Tree boards use leaf-to-root message passing under the automatic method.
/// Throws std::invalid_argument if the boundary admits no extension.
std::vector<double> boundary_influence(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                                       const PartialMap& boundary, Site target,
                                       InfluenceMethod method = InfluenceMethod::automatic,
                                       const EnumerationLimits& limits = {});

// Exact dynamic programming on acyclic boards (each component a tree).

std::vector<double> tree_marginal(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                                  const PartialMap& pins, Site target);
/// Number of homomorphisms agreeing with the pins.
BigInt tree_extension_count(const Board& g, const ConstraintGraph& h, const PartialMap& pins);
/// Spins the target can take in some homomorphism agreeing with the pins.
NodeMask tree_feasible_spins(const Board& g, const ConstraintGraph& h, const PartialMap& pins, Site target);

}  // namespace homgibbs
