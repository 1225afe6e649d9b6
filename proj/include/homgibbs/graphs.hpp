#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace homgibbs {

/// Index of a node of a constraint graph (a spin value).
using Node = std::uint32_t;
/// Index of a site of a board.
using Site = std::uint32_t;
/// Bitset over constraint-graph nodes; bit i set means node i is a member.
using NodeMask = std::uint64_t;

inline constexpr std::size_t kMaxConstraintNodes = 64;

constexpr NodeMask node_bit(Node i) { return NodeMask{1} << i; }

struct Edge {
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite graph H of permitted adjacent-spin pairs. Loops are allowed.
///
/// Adjacency is held twice: as one bitset row per node (N(i), which contains i
/// exactly when i is looped) and as a sorted edge list with a <= b. At most 64
/// nodes are supported.
class ConstraintGraph {
public:
    ConstraintGraph() = default;
    /// Throws std::invalid_argument for q == 0, q > 64 or out-of-range endpoints.
    ConstraintGraph(std::size_t q, std::span<const Edge> edges, std::vector<std::string> labels = {});

    std::size_t size() const { return rows_.size(); }
    bool adjacent(Node i, Node j) const { return (rows_[i] >> j) & 1U; }
    bool looped(Node i) const { return adjacent(i, i); }
    /// N(i) as a bitset.
    NodeMask row(Node i) const { return rows_[i]; }
    std::span<const NodeMask> rows() const { return rows_; }
    std::span<const Node> neighbors(Node i) const;
    /// Edges with a <= b; loops appear as (i, i).
    std::span<const Edge> edges() const { return edges_; }
    NodeMask all_nodes() const;
    std::size_t loop_count() const;

    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(Node i) const;

    /// Subgraph induced by the nodes in `keep`, reindexed densely in increasing order.
    ConstraintGraph induced(NodeMask keep) const;
    /// Relabels node i as perm[i].
    ConstraintGraph permuted(std::span<const Node> perm) const;

    /// Equality of the adjacency relation; labels are ignored.
    friend bool operator==(const ConstraintGraph& x, const ConstraintGraph& y) { return x.rows_ == y.rows_; }

private:
    std::vector<NodeMask> rows_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> nbr_offsets_;
    std::vector<Node> nbrs_;
    std::vector<std::string> labels_;
};

/// Optional geometric metadata carried by generated boards.
struct BoardGeometry {
    enum class Kind { none, grid, tree };
    Kind kind = Kind::none;
    /// Grid: dimension and per-site integer coordinates in [-n, n]^d.
    unsigned dim = 0;
    int half_width = 0;
    std::vector<std::array<int, 3>> coords;
    /// Tree: branching factor, per-site depth and parent (root's parent is itself).
    unsigned branching = 0;
    std::vector<std::uint32_t> depth;
    std::vector<Site> parent;
};

/// Finite loopless graph G of sites.
class Board {
public:
    Board() = default;
    /// Duplicate edges are merged. Throws std::invalid_argument on loops,
    /// out-of-range endpoints, or when n exceeds the board site cap.
    Board(std::size_t n, std::span<const Edge> edges, BoardGeometry geometry = {});

    std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<const Site> neighbors(Site s) const
    {
        return {nbrs_.data() + offsets_[s], nbrs_.data() + offsets_[s + 1]};
    }
    std::size_t degree(Site s) const { return offsets_[s + 1] - offsets_[s]; }
    bool adjacent(Site s, Site t) const;
    /// Edges with a < b, sorted.
    std::span<const Edge> edges() const { return edges_; }
    const BoardGeometry& geometry() const { return geometry_; }

    friend bool operator==(const Board& x, const Board& y) { return x.offsets_ == y.offsets_ && x.nbrs_ == y.nbrs_; }

private:
    std::vector<std::uint32_t> offsets_;
    std::vector<Site> nbrs_;
    std::vector<Edge> edges_;
    BoardGeometry geometry_;
};

/// Largest board any constructor will build. Default 10^7 sites.
std::size_t board_site_cap();
void set_board_site_cap(std::size_t cap);

// Standard constraint graphs.
ConstraintGraph hard_core();                 ///< 0 = occupied (unlooped), 1 = vacant (looped)
ConstraintGraph hinge();                     ///< 0 = green, 1 = yellow, 2 = red; all looped, no green-red edge
ConstraintGraph complete_graph(std::size_t q);
ConstraintGraph cycle_graph(std::size_t k, bool looped);
ConstraintGraph path_graph(std::size_t k, bool looped);
ConstraintGraph single_looped_node();

/// Parses names such as "hard_core", "hinge", "K3", "K_4", "cycle:5", "cycle:4:looped",
/// "path:3:looped", "looped_node". Throws std::invalid_argument for unknown names.
ConstraintGraph make_standard(std::string_view name);

// Standard boards. Sites are numbered so that every prefix of a tree board is
// itself the truncation at smaller depth.
Board grid_box(int n, unsigned dim);
Board tree_board(unsigned r, unsigned depth);
Board path_board(std::size_t len);
Board complete_board(std::size_t k);

/// Parses "grid:n:d", "tree:r:depth", "path:len", "complete:k". Throws on unknown names.
Board make_board(std::string_view name);

/// Closed-form site count of tree_board(r, depth).
std::uint64_t tree_site_count(unsigned r, unsigned depth);

/// Parity of a grid or tree site: 0 for even, 1 for odd.
unsigned site_parity(const Board& board, Site s);

/// Board on ordered pairs (i1, i2), site index i1 * q + i2, with
/// (i1, i2) ~ (j1, j2) iff i1 ~ j1 and i2 ~ j2, for distinct sites.
Board weak_square(const ConstraintGraph& h);

/// Bipartite double 2H. Node +i has index i and node -i has index q + i;
/// +i ~ -j in 2H iff i ~ j in H.
ConstraintGraph double_graph(const ConstraintGraph& h);

/// 2-colouring (0/1 per node) when bipartite; a loop rules it out.
std::optional<std::vector<std::uint8_t>> bipartition(const ConstraintGraph& h);
std::optional<std::vector<std::uint8_t>> bipartition(const Board& g);
inline bool is_bipartite(const ConstraintGraph& h) { return bipartition(h).has_value(); }
inline bool is_bipartite(const Board& g) { return bipartition(g).has_value(); }

bool is_connected(const ConstraintGraph& h);
bool is_connected(const Board& g);
/// Connected components of the nodes of h, as bitsets.
std::vector<NodeMask> components(const ConstraintGraph& h);

/// Whether a connected board has no cycles.
bool is_tree(const Board& g);
/// Whether the board has no cycles.
bool is_forest(const Board& g);

/// Lexicographically least adjacency encoding over all relabelings (q <= 8).
std::vector<NodeMask> canonical_form(const ConstraintGraph& h);

/// Every connected graph with at least one edge (a loop counts) on 1..max_nodes
/// nodes, all loop patterns, one representative per isomorphism class.
std::vector<ConstraintGraph> enumerate_connected_graphs(std::size_t max_nodes);

/// All loopless graphs on exactly n sites (labelled, no dedup), for small n.
std::vector<Board> enumerate_boards(std::size_t n);

}  // namespace homgibbs
