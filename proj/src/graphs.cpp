#include "homgibbs/graphs.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace homgibbs {

namespace {

std::atomic<std::size_t> g_site_cap{10'000'000};

void check_cap(std::uint64_t n)
{
    if (n > board_site_cap())
        throw std::invalid_argument("board of " + std::to_string(n) + " sites exceeds the site cap of " +
                                    std::to_string(board_site_cap()));
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

long parse_int(std::string_view s, std::string_view what)
{
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument("bad integer '" + std::string(s) + "' in " + std::string(what));
    return value;
}

}  // namespace

std::size_t board_site_cap() { return g_site_cap.load(std::memory_order_relaxed); }
void set_board_site_cap(std::size_t cap) { g_site_cap.store(cap, std::memory_order_relaxed); }

// ---------------------------------------------------------------- ConstraintGraph

ConstraintGraph::ConstraintGraph(std::size_t q, std::span<const Edge> edges, std::vector<std::string> labels)
{
    if (q == 0)
        throw std::invalid_argument("constraint graph needs at least one node");
    if (q > kMaxConstraintNodes)
        throw std::invalid_argument("constraint graph has more than 64 nodes");
    if (!labels.empty() && labels.size() != q)
        throw std::invalid_argument("label count does not match node count");
    rows_.assign(q, 0);
    for (const auto& e : edges) {
        if (e.a >= q || e.b >= q)
            throw std::invalid_argument("edge endpoint out of range");
        rows_[e.a] |= node_bit(e.b);
        rows_[e.b] |= node_bit(e.a);
    }
    nbr_offsets_.push_back(0);
    for (Node i = 0; i < q; ++i) {
        for (Node j = 0; j < q; ++j)
            if (adjacent(i, j)) {
                nbrs_.push_back(j);
                if (i <= j)
                    edges_.push_back({i, j});
            }
        nbr_offsets_.push_back(static_cast<std::uint32_t>(nbrs_.size()));
    }
    labels_ = std::move(labels);
}

std::span<const Node> ConstraintGraph::neighbors(Node i) const
{
    return {nbrs_.data() + nbr_offsets_[i], nbrs_.data() + nbr_offsets_[i + 1]};
}

NodeMask ConstraintGraph::all_nodes() const
{
    return size() == 64 ? ~NodeMask{0} : node_bit(static_cast<Node>(size())) - 1;
}

std::size_t ConstraintGraph::loop_count() const
{
    std::size_t n = 0;
    for (Node i = 0; i < size(); ++i)
        n += looped(i) ? 1 : 0;
    return n;
}

std::string ConstraintGraph::label(Node i) const
{
    return labels_.empty() ? std::to_string(i) : labels_[i];
}

ConstraintGraph ConstraintGraph::induced(NodeMask keep) const
{
    std::vector<Node> index(size(), 0);
    std::vector<std::string> labels;
    Node next = 0;
    for (Node i = 0; i < size(); ++i)
        if (keep & node_bit(i)) {
            index[i] = next++;
            if (!labels_.empty())
                labels.push_back(labels_[i]);
        }
    std::vector<Edge> edges;
    for (const auto& e : edges_)
        if ((keep & node_bit(e.a)) && (keep & node_bit(e.b)))
            edges.push_back({index[e.a], index[e.b]});
    return ConstraintGraph(next, edges, std::move(labels));
}

ConstraintGraph ConstraintGraph::permuted(std::span<const Node> perm) const
{
    if (perm.size() != size())
        throw std::invalid_argument("permutation size mismatch");
    std::vector<Edge> edges;
    for (const auto& e : edges_)
        edges.push_back({perm[e.a], perm[e.b]});
    std::vector<std::string> labels;
    if (!labels_.empty()) {
        labels.resize(size());
        for (Node i = 0; i < size(); ++i)
            labels[perm[i]] = labels_[i];
    }
    return ConstraintGraph(size(), edges, std::move(labels));
}

// ---------------------------------------------------------------- Board

Board::Board(std::size_t n, std::span<const Edge> edges, BoardGeometry geometry) : geometry_(std::move(geometry))
{
    check_cap(n);
    std::vector<Edge> sorted;
    sorted.reserve(edges.size());
    for (auto e : edges) {
        if (e.a >= n || e.b >= n)
            throw std::invalid_argument("board edge endpoint out of range");
        if (e.a == e.b)
            throw std::invalid_argument("boards may not have loops");
        if (e.a > e.b)
            std::swap(e.a, e.b);
        sorted.push_back(e);
    }
    std::sort(sorted.begin(), sorted.end(), [](const Edge& x, const Edge& y) {
        return std::pair(x.a, x.b) < std::pair(y.a, y.b);
    });
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    edges_ = std::move(sorted);

    std::vector<std::uint32_t> deg(n, 0);
    for (const auto& e : edges_) {
        ++deg[e.a];
        ++deg[e.b];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t s = 0; s < n; ++s)
        offsets_[s + 1] = offsets_[s] + deg[s];
    nbrs_.resize(offsets_[n]);
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        nbrs_[fill[e.a]++] = e.b;
        nbrs_[fill[e.b]++] = e.a;
    }
    for (std::size_t s = 0; s < n; ++s)
        std::sort(nbrs_.begin() + offsets_[s], nbrs_.begin() + offsets_[s + 1]);
}

bool Board::adjacent(Site s, Site t) const
{
    auto nb = neighbors(s);
    return std::binary_search(nb.begin(), nb.end(), t);
}

// ---------------------------------------------------------------- standard graphs

ConstraintGraph hard_core()
{
    const Edge edges[] = {{0, 1}, {1, 1}};
    return ConstraintGraph(2, edges, {"occupied", "vacant"});
}

ConstraintGraph hinge()
{
    const Edge edges[] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}};
    return ConstraintGraph(3, edges, {"green", "yellow", "red"});
}

ConstraintGraph complete_graph(std::size_t q)
{
    if (q == 0)
        throw std::invalid_argument("K_q needs q >= 1");
    std::vector<Edge> edges;
    for (Node i = 0; i < q; ++i)
        for (Node j = i + 1; j < q; ++j)
            edges.push_back({i, j});
    return ConstraintGraph(q, edges);
}

ConstraintGraph cycle_graph(std::size_t k, bool looped)
{
    if (k == 0)
        throw std::invalid_argument("cycle needs k >= 1");
    std::vector<Edge> edges;
    for (Node i = 0; i < k; ++i) {
        edges.push_back({i, static_cast<Node>((i + 1) % k)});
        if (looped)
            edges.push_back({i, i});
    }
    if (k == 1 && !looped)
        edges.clear();
    return ConstraintGraph(k, edges);
}

ConstraintGraph path_graph(std::size_t k, bool looped)
{
    if (k == 0)
        throw std::invalid_argument("path needs k >= 1");
    std::vector<Edge> edges;
    for (Node i = 0; i < k; ++i) {
        if (i + 1 < k)
            edges.push_back({i, i + 1});
        if (looped)
            edges.push_back({i, i});
    }
    return ConstraintGraph(k, edges);
}

ConstraintGraph single_looped_node()
{
    const Edge edges[] = {{0, 0}};
    return ConstraintGraph(1, edges);
}

ConstraintGraph make_standard(std::string_view name)
{
    auto parts = split(name, ':');
    auto head = parts[0];
    auto looped_flag = [&](std::size_t idx) {
        if (parts.size() <= idx)
            return false;
        if (parts[idx] == "looped")
            return true;
        if (parts[idx] == "plain")
            return false;
        throw std::invalid_argument("expected 'looped' or 'plain' in graph name '" + std::string(name) + "'");
    };
    if (parts.size() == 1 && (head == "hard_core" || head == "hardcore" || head == "hard-core"))
        return hard_core();
    if (parts.size() == 1 && head == "hinge")
        return hinge();
    if (parts.size() == 1 && (head == "looped_node" || head == "single_looped_node"))
        return single_looped_node();
    if (head == "cycle" && parts.size() >= 2 && parts.size() <= 3)
        return cycle_graph(static_cast<std::size_t>(std::max(0L, parse_int(parts[1], name))), looped_flag(2));
    if (head == "path" && parts.size() >= 2 && parts.size() <= 3)
        return path_graph(static_cast<std::size_t>(std::max(0L, parse_int(parts[1], name))), looped_flag(2));
    if (parts.size() == 1 && head.size() >= 2 && (head[0] == 'K' || head[0] == 'k')) {
        auto digits = head.substr(head[1] == '_' ? 2 : 1);
        return complete_graph(static_cast<std::size_t>(std::max(0L, parse_int(digits, name))));
    }
    if (head == "K" && parts.size() == 2)
        return complete_graph(static_cast<std::size_t>(std::max(0L, parse_int(parts[1], name))));
    throw std::invalid_argument("unknown constraint graph '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- standard boards

Board grid_box(int n, unsigned dim)
{
    if (n < 0)
        throw std::invalid_argument("grid_box needs n >= 0");
    if (dim < 1 || dim > 3)
        throw std::invalid_argument("grid_box dimension must be 1, 2 or 3");
    const std::uint64_t side = 2 * static_cast<std::uint64_t>(n) + 1;
    std::uint64_t count = 1;
    for (unsigned k = 0; k < dim; ++k) {
        count *= side;
        check_cap(count);
    }
    BoardGeometry geo;
    geo.kind = BoardGeometry::Kind::grid;
    geo.dim = dim;
    geo.half_width = n;
    geo.coords.resize(count);
    std::vector<Edge> edges;
    std::uint64_t stride[3] = {1, 1, 1};
    for (unsigned k = 0; k < dim; ++k)
        stride[k] = k == 0 ? 1 : stride[k - 1] * side;
    // Site index = sum_k (coord_k + n) * side^(dim-1-k): first coordinate is most significant.
    for (std::uint64_t s = 0; s < count; ++s) {
        std::uint64_t rest = s;
        for (unsigned k = dim; k-- > 0;) {
            geo.coords[s][k] = static_cast<int>(rest % side) - n;
            rest /= side;
        }
        for (unsigned k = 0; k < dim; ++k) {
            const auto step = stride[dim - 1 - k];
            if (geo.coords[s][k] < n)
                edges.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s + step)});
        }
    }
    return Board(count, edges, std::move(geo));
}

std::uint64_t tree_site_count(unsigned r, unsigned depth)
{
    if (r == 0)
        throw std::invalid_argument("tree needs r >= 1");
    if (depth == 0)
        return 1;
    // root has r + 1 children, every later internal site has r.
    std::uint64_t total = 1;
    std::uint64_t level = r + 1;
    for (unsigned d = 1; d <= depth; ++d) {
        total += level;
        if (total > std::uint64_t{1} << 62)
            throw std::invalid_argument("tree size overflow");
        level *= r;
    }
    return total;
}

Board tree_board(unsigned r, unsigned depth)
{
    if (r == 0)
        throw std::invalid_argument("tree needs r >= 1");
    const auto count = tree_site_count(r, depth);
    check_cap(count);
    BoardGeometry geo;
    geo.kind = BoardGeometry::Kind::tree;
    geo.branching = r;
    geo.depth.reserve(count);
    geo.parent.reserve(count);
    geo.depth.push_back(0);
    geo.parent.push_back(0);
    std::vector<Edge> edges;
    edges.reserve(count - 1);
    // Breadth-first: children of site s are appended in order, so sites at
    // depth <= d form a prefix.
    for (Site s = 0; s < count; ++s) {
        if (geo.depth[s] == depth)
            continue;
        const unsigned kids = s == 0 ? r + 1 : r;
        for (unsigned c = 0; c < kids; ++c) {
            const auto child = static_cast<Site>(geo.depth.size());
            geo.depth.push_back(geo.depth[s] + 1);
            geo.parent.push_back(s);
            edges.push_back({s, child});
        }
    }
    return Board(count, edges, std::move(geo));
}

Board path_board(std::size_t len)
{
    std::vector<Edge> edges;
    for (std::size_t s = 0; s + 1 < len; ++s)
        edges.push_back({static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s + 1)});
    BoardGeometry geo;
    geo.kind = BoardGeometry::Kind::grid;
    geo.dim = 1;
    for (std::size_t s = 0; s < len; ++s)
        geo.coords.push_back({static_cast<int>(s), 0, 0});
    return Board(len, edges, std::move(geo));
}

Board complete_board(std::size_t k)
{
    check_cap(k);
    std::vector<Edge> edges;
    for (std::uint32_t a = 0; a < k; ++a)
        for (std::uint32_t b = a + 1; b < k; ++b)
            edges.push_back({a, b});
    return Board(k, edges);
}

Board make_board(std::string_view name)
{
    auto parts = split(name, ':');
    auto arg = [&](std::size_t idx) { return parse_int(parts.at(idx), name); };
    if (parts[0] == "grid" && parts.size() == 3) {
        auto d = arg(2);
        if (d < 1 || d > 3)
            throw std::invalid_argument("grid dimension must be 1, 2 or 3");
        return grid_box(static_cast<int>(arg(1)), static_cast<unsigned>(d));
    }
    if (parts[0] == "tree" && parts.size() == 3) {
        if (arg(1) < 1 || arg(2) < 0)
            throw std::invalid_argument("tree needs r >= 1 and depth >= 0");
        return tree_board(static_cast<unsigned>(arg(1)), static_cast<unsigned>(arg(2)));
    }
    if (parts[0] == "path" && parts.size() == 2 && arg(1) >= 0)
        return path_board(static_cast<std::size_t>(arg(1)));
    if (parts[0] == "complete" && parts.size() == 2 && arg(1) >= 0)
        return complete_board(static_cast<std::size_t>(arg(1)));
    throw std::invalid_argument("unknown board '" + std::string(name) + "'");
}

unsigned site_parity(const Board& board, Site s)
{
    const auto& geo = board.geometry();
    switch (geo.kind) {
    case BoardGeometry::Kind::grid: {
        int sum = 0;
        for (unsigned k = 0; k < 3; ++k)
            sum += geo.coords[s][k];
        return static_cast<unsigned>(sum & 1);
    }
    case BoardGeometry::Kind::tree:
        return geo.depth[s] & 1U;
    case BoardGeometry::Kind::none:
        break;
    }
    auto sides = bipartition(board);
    if (!sides)
        throw std::invalid_argument("site parity needs a bipartite board");
    return (*sides)[s];
}

// ---------------------------------------------------------------- derived graphs

Board weak_square(const ConstraintGraph& h)
{
    const auto q = static_cast<std::uint32_t>(h.size());
    std::vector<Edge> edges;
    for (std::uint32_t i1 = 0; i1 < q; ++i1)
        for (std::uint32_t i2 = 0; i2 < q; ++i2)
            for (std::uint32_t j1 = 0; j1 < q; ++j1)
                for (std::uint32_t j2 = 0; j2 < q; ++j2) {
                    const auto a = i1 * q + i2;
                    const auto b = j1 * q + j2;
                    if (a < b && h.adjacent(i1, j1) && h.adjacent(i2, j2))
                        edges.push_back({a, b});
                }
    return Board(static_cast<std::size_t>(q) * q, edges);
}

ConstraintGraph double_graph(const ConstraintGraph& h)
{
    const auto q = static_cast<Node>(h.size());
    if (2 * h.size() > kMaxConstraintNodes)
        throw std::invalid_argument("double of a graph with more than 32 nodes");
    std::vector<Edge> edges;
    for (Node i = 0; i < q; ++i)
        for (Node j = 0; j < q; ++j)
            if (h.adjacent(i, j))
                edges.push_back({i, q + j});
    std::vector<std::string> labels;
    for (Node i = 0; i < q; ++i)
        labels.push_back("+" + h.label(i));
    for (Node i = 0; i < q; ++i)
        labels.push_back("-" + h.label(i));
    return ConstraintGraph(2 * h.size(), edges, std::move(labels));
}

namespace {

template <class NeighborsOf>
std::optional<std::vector<std::uint8_t>> two_colour(std::size_t n, NeighborsOf&& neighbors_of)
{
    std::vector<std::uint8_t> side(n, 2);
    std::queue<std::uint32_t> todo;
    for (std::uint32_t start = 0; start < n; ++start) {
        if (side[start] != 2)
            continue;
        side[start] = 0;
        todo.push(start);
        while (!todo.empty()) {
            auto x = todo.front();
            todo.pop();
            for (auto y : neighbors_of(x)) {
                if (side[y] == 2) {
                    side[y] = static_cast<std::uint8_t>(1 - side[x]);
                    todo.push(y);
                } else if (side[y] == side[x]) {
                    return std::nullopt;
                }
            }
        }
    }
    return side;
}

template <class NeighborsOf>
std::vector<std::uint32_t> component_labels(std::size_t n, NeighborsOf&& neighbors_of, std::size_t& count)
{
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    count = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < n; ++start) {
        if (comp[start] != UINT32_MAX)
            continue;
        comp[start] = static_cast<std::uint32_t>(count);
        stack.push_back(start);
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto y : neighbors_of(x))
                if (comp[y] == UINT32_MAX) {
                    comp[y] = static_cast<std::uint32_t>(count);
                    stack.push_back(y);
                }
        }
        ++count;
    }
    return comp;
}

}  // namespace

std::optional<std::vector<std::uint8_t>> bipartition(const ConstraintGraph& h)
{
    return two_colour(h.size(), [&](std::uint32_t x) { return h.neighbors(x); });
}

std::optional<std::vector<std::uint8_t>> bipartition(const Board& g)
{
    return two_colour(g.size(), [&](std::uint32_t x) { return g.neighbors(x); });
}

bool is_connected(const ConstraintGraph& h) { return components(h).size() == 1; }

bool is_connected(const Board& g)
{
    if (g.size() == 0)
        return true;
    std::size_t count = 0;
    component_labels(g.size(), [&](std::uint32_t x) { return g.neighbors(x); }, count);
    return count == 1;
}

std::vector<NodeMask> components(const ConstraintGraph& h)
{
    std::size_t count = 0;
    auto comp = component_labels(h.size(), [&](std::uint32_t x) { return h.neighbors(x); }, count);
    std::vector<NodeMask> out(count, 0);
    for (Node i = 0; i < h.size(); ++i)
        out[comp[i]] |= node_bit(i);
    return out;
}

bool is_forest(const Board& g)
{
    std::size_t count = 0;
    component_labels(g.size(), [&](std::uint32_t x) { return g.neighbors(x); }, count);
    return g.edges().size() + count == g.size();
}

bool is_tree(const Board& g)
{
    return g.size() > 0 && is_connected(g) && g.edges().size() == g.size() - 1;
}

// ---------------------------------------------------------------- small-graph corpus

std::vector<NodeMask> canonical_form(const ConstraintGraph& h)
{
    const auto q = h.size();
    if (q > 8)
        throw std::invalid_argument("canonical form limited to 8 nodes");
    std::vector<Node> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<NodeMask> best;
    std::vector<NodeMask> rows(q);
    do {
        // Node i is relabelled perm[i].
        for (Node i = 0; i < q; ++i) {
            NodeMask row = 0;
            for (Node j = 0; j < q; ++j)
                if (h.adjacent(i, j))
                    row |= node_bit(perm[j]);
            rows[perm[i]] = row;
        }
        if (best.empty() || rows < best)
            best = rows;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::vector<ConstraintGraph> enumerate_connected_graphs(std::size_t max_nodes)
{
    if (max_nodes > 6)
        throw std::invalid_argument("graph enumeration limited to 6 nodes");
    std::vector<ConstraintGraph> out;
    for (std::size_t q = 1; q <= max_nodes; ++q) {
        std::vector<Edge> slots;
        for (Node i = 0; i < q; ++i)
            for (Node j = i; j < q; ++j)
                slots.push_back({i, j});
        std::set<std::vector<NodeMask>> seen;
        const std::uint64_t patterns = std::uint64_t{1} << slots.size();
        std::vector<Edge> edges;
        for (std::uint64_t bits = 1; bits < patterns; ++bits) {
            edges.clear();
            for (std::size_t k = 0; k < slots.size(); ++k)
                if ((bits >> k) & 1U)
                    edges.push_back(slots[k]);
            ConstraintGraph h(q, edges);
            if (!is_connected(h))
                continue;
            if (seen.insert(canonical_form(h)).second)
                out.push_back(std::move(h));
        }
    }
    return out;
}

std::vector<Board> enumerate_boards(std::size_t n)
{
    if (n > 5)
        throw std::invalid_argument("board enumeration limited to 5 sites");
    std::vector<Edge> slots;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            slots.push_back({a, b});
    std::vector<Board> out;
    std::vector<Edge> edges;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << slots.size()); ++bits) {
        edges.clear();
        for (std::size_t k = 0; k < slots.size(); ++k)
            if ((bits >> k) & 1U)
                edges.push_back(slots[k]);
        out.emplace_back(n, edges);
    }
    return out;
}

}  // namespace homgibbs
