#pragma once

#include "homgibbs/graphs.hpp"
#include "homgibbs/homspace.hpp"
#include "homgibbs/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace homgibbs {

/// Nodes that count as "occupied": those not adjacent to every node of H.
/// hard_core: {occupied}; hinge: {green, red}; K_q: everything.
NodeMask default_occupied(const ConstraintGraph& h);

// ---------------------------------------------------------------- initial states

/// Every site gets `spin`; free sites only need `spin` looped. Throws
/// std::invalid_argument when the result is not a homomorphism.
HomMap constant_init(const Board& g, const ConstraintGraph& h, Node spin);

/// Sites of the given parity get an occupied spin, the rest a looped spin adjacent to it
/// (least indices). For hard-core this is the full even (parity 0) or odd sublattice.
HomMap sublattice_init(const Board& g, const ConstraintGraph& h, unsigned parity);

/// Sites visited in random order, each drawing from lambda restricted to the
/// spins legal against already-assigned neighbours. Pinned sites keep their
/// spin. Retries with fresh orders; throws std::runtime_error after 100 failures.
HomMap random_greedy_init(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, Rng rng,
                          const PartialMap& pins = {});

// ---------------------------------------------------------------- chain

/// Single-site heat-bath chain on hom(G, H): pick a free site uniformly, give
/// it spin j with probability proportional to lambda_j among spins adjacent in
/// H to every neighbour's spin. Pinned sites never change.
class Chain {
public:
    /// Throws std::invalid_argument if init is not a homomorphism, disagrees
    /// with pins, or lambda is not positive.
    Chain(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, HomMap init, Rng rng,
          const PartialMap& pins = {});

    void step();
    /// free_sites() single-site updates.
    void sweep();

    const HomMap& state() const { return spins_; }
    std::uint64_t steps() const { return steps_; }
    std::uint64_t changes() const { return changes_; }
    std::size_t free_sites() const { return free_.size(); }
    const Rng& rng() const { return rng_; }
    bool valid() const;

private:
    Node draw(NodeMask legal);

    const Board* g_;
    const ConstraintGraph* h_;
    std::vector<double> lambda_;
    std::vector<NodeMask> rows_;
    HomMap spins_;
    std::vector<Site> free_;
    Rng rng_;
    std::uint64_t steps_ = 0;
    std::uint64_t changes_ = 0;
    // Cumulative lambda over the spins of each legal mask, for q <= table_limit.
    static constexpr std::size_t table_limit = 10;
    std::vector<double> cdf_;
};

// ---------------------------------------------------------------- runs

struct RunOptions {
    std::uint64_t sweeps = 1000;
    double burn_in = 0.2;          ///< fraction of sweeps excluded from summaries
    NodeMask occupied = 0;         ///< 0 selects default_occupied(h)
    std::uint64_t validate_every = ///< sweeps between homomorphism checks, 0 = never
#ifdef NDEBUG
        0;
#else
        1;
#endif
    bool keep_snapshots = false;   ///< record the state after every sweep
};

struct RunStats {
    std::uint64_t sweeps = 0;
    std::uint64_t burn_in = 0;
    std::size_t n_sites = 0;
    std::size_t q = 0;
    std::uint64_t updates = 0;
    std::uint64_t changes = 0;  ///< updates that changed the spin
    bool has_parity = false;    ///< even/odd series are filled (bipartite board)
    // One entry per sweep (index 0 = initial state, then after each sweep).
    std::vector<std::uint32_t> occupied;
    std::vector<std::uint32_t> even_occupied;
    std::vector<std::uint32_t> odd_occupied;
    std::vector<std::uint32_t> color_counts;  ///< row-major: sweep * q + spin
    HomMap initial;
    HomMap final_state;
    std::vector<HomMap> snapshots;
};

RunStats run(const Board& g, const ConstraintGraph& h, std::span<const double> lambda, HomMap init, Rng rng,
             const RunOptions& options = {}, const PartialMap& pins = {});

/// rho = even / (even + odd) per recorded sweep; 0.5 when nothing is occupied.
/// Throws std::invalid_argument if the run has no parity series.
std::vector<double> parity_series(const RunStats& stats);

/// Integrated autocorrelation time with Sokal's automatic window (c = 5).
double integrated_autocorrelation(std::span<const double> series);

nlohmann::json to_json(const RunStats& stats);
/// sweep,occupied,even,odd,rho,count_0..count_{q-1}
std::string to_csv(const RunStats& stats);

// ---------------------------------------------------------------- phenomenology

struct BimodalityOptions {
    std::uint64_t sweeps = 10000;
    std::size_t replicas = 200;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double dip_lo = 0.4;
    double dip_hi = 0.6;
    std::size_t bins = 20;
};

struct BimodalityReport {
    std::vector<double> final_rho;            ///< replica order: even-started first, then odd-started
    std::vector<std::size_t> histogram;       ///< bins over [0, 1]
    double dip_fraction = 0;                  ///< final rho in [dip_lo, dip_hi]
    double mean_rho_even_start = 0;
    double mean_rho_odd_start = 0;
};

/// Half the replicas start on the full even sublattice, half on the odd one.
/// Throws std::invalid_argument for a non-bipartite board.
BimodalityReport bimodality(const Board& g, const ConstraintGraph& h, std::span<const double> lambda,
                            const BimodalityOptions& options = {});
nlohmann::json to_json(const BimodalityReport& report);

struct DominanceOptions {
    std::uint64_t sweeps = 2000;
    std::size_t replicas = 40;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    double lambda_yellow = 1.0;
    double concentrated = 0.2;  ///< |D| below this counts as mixed
    double dominated = 0.8;     ///< |D| above this counts as one gas dominating
};

struct DominanceReport {
    struct Point {
        double t = 0;
        std::vector<double> dominance;  ///< (green - red) / (green + red), final state per replica
        double mean_abs = 0;
        double fraction_mixed = 0;
        double fraction_dominated = 0;
    };
    std::vector<Point> points;
    /// Consecutive t values between which the mean |D| first exceeds 1/2; both
    /// unset when it never does.
    std::optional<double> onset_lo, onset_hi;
};

/// Widom-Rowlinson dominance on the hinge with lambda = (t, lambda_yellow, t),
/// replicas started from random greedy states.
DominanceReport wr_dominance(const Board& g, std::span<const double> t_values, const DominanceOptions& options = {});
nlohmann::json to_json(const DominanceReport& report);

// ---------------------------------------------------------------- pins

/// Sites of a grid board with some coordinate at +-half_width.
std::vector<Site> grid_boundary(const Board& g);
/// {"pins": [[site, spin], ...]}
PartialMap pins_from_json(const nlohmann::json& j, std::size_t n_sites, std::size_t q);
nlohmann::json to_json(const PartialMap& pins);

// ---------------------------------------------------------------- images

struct RenderOptions {
    unsigned block = 4;                ///< pixels per site
    NodeMask blank = 0;                ///< spins drawn as background
    bool parity_colors = false;        ///< occupied sites coloured by sublattice (hard-core style)
    NodeMask occupied = 0;             ///< for parity_colors; 0 selects default_occupied(h)
};

/// Writes a binary PPM (or PGM when the extension is .pgm) of a 1- or
/// 2-dimensional grid configuration. Throws std::invalid_argument for other
/// boards and std::runtime_error on I/O failure.
void render(const Board& g, const ConstraintGraph& h, std::span<const Node> spins, const std::filesystem::path& path,
            const RenderOptions& options = {});

}  // namespace homgibbs
