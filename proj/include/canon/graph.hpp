#ifndef CANON_GRAPH_HPP
#define CANON_GRAPH_HPP

#include <canon/errors.hpp>

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace canon {

using VertexId = std::string;
using EdgeId = std::string;

/// An edge oriented from `tail` to `head`. Loops have tail == head.
struct Edge {
    EdgeId id;
    VertexId tail;
    VertexId head;

    bool is_loop() const { return tail == head; }
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Finite multigraph with a genus function and optional markings.
///
/// Vertices are kept sorted by id and edges sorted by edge id, so every
/// enumeration derived from a graph is deterministic.
class AugmentedGraph {
public:
    AugmentedGraph() = default;

    /// Vertices missing from `genus` get genus zero. `marks` must be keyed
    /// by exactly 1..n when non-empty.
    AugmentedGraph(std::vector<VertexId> vertices,
                   std::vector<Edge> edges,
                   std::map<VertexId, int> genus = {},
                   std::map<int, VertexId> marks = {})
        : vertices_(std::move(vertices)), edges_(std::move(edges)), marks_(std::move(marks))
    {
        std::sort(vertices_.begin(), vertices_.end());
        if (std::adjacent_find(vertices_.begin(), vertices_.end()) != vertices_.end()) {
            throw PreconditionError("duplicate vertex id");
        }
        std::sort(edges_.begin(), edges_.end(),
                  [](const Edge& a, const Edge& b) { return a.id < b.id; });
        for (std::size_t i = 0; i < edges_.size(); ++i) {
            if (i > 0 && edges_[i].id == edges_[i - 1].id) {
                throw PreconditionError("duplicate edge id '" + edges_[i].id + "'");
            }
            if (!has_vertex(edges_[i].tail) || !has_vertex(edges_[i].head)) {
                throw PreconditionError("edge '" + edges_[i].id + "' references an unknown vertex");
            }
        }
        for (const auto& [v, g] : genus) {
            if (!has_vertex(v)) throw PreconditionError("genus given for unknown vertex '" + v + "'");
            if (g < 0) throw PreconditionError("negative genus at vertex '" + v + "'");
        }
        for (const auto& v : vertices_) {
            auto it = genus.find(v);
            genus_[v] = it == genus.end() ? 0 : it->second;
        }
        int expected = 1;
        for (const auto& [label, v] : marks_) {
            if (label != expected++) throw PreconditionError("marks must be labelled 1..n");
            if (!has_vertex(v)) throw PreconditionError("mark on unknown vertex '" + v + "'");
        }
    }

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::map<VertexId, int>& genus() const { return genus_; }
    const std::map<int, VertexId>& marks() const { return marks_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_vertex(const VertexId& v) const
    {
        return std::binary_search(vertices_.begin(), vertices_.end(), v);
    }

    std::optional<std::size_t> find_edge(const EdgeId& e) const
    {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), e,
                                   [](const Edge& a, const EdgeId& id) { return a.id < id; });
        if (it == edges_.end() || it->id != e) return std::nullopt;
        return static_cast<std::size_t>(it - edges_.begin());
    }

    bool has_edge(const EdgeId& e) const { return find_edge(e).has_value(); }

    const Edge& edge(const EdgeId& e) const
    {
        auto idx = find_edge(e);
        if (!idx) throw PreconditionError("unknown edge id '" + e + "'");
        return edges_[*idx];
    }

    std::size_t vertex_index(const VertexId& v) const
    {
        auto it = std::lower_bound(vertices_.begin(), vertices_.end(), v);
        if (it == vertices_.end() || *it != v) throw PreconditionError("unknown vertex id '" + v + "'");
        return static_cast<std::size_t>(it - vertices_.begin());
    }

    int genus_of(const VertexId& v) const
    {
        auto it = genus_.find(v);
        if (it == genus_.end()) throw PreconditionError("unknown vertex id '" + v + "'");
        return it->second;
    }

    std::vector<EdgeId> edge_ids() const
    {
        std::vector<EdgeId> ids;
        ids.reserve(edges_.size());
        for (const auto& e : edges_) ids.push_back(e.id);
        return ids;
    }

    friend bool operator==(const AugmentedGraph&, const AugmentedGraph&) = default;

private:
    std::vector<VertexId> vertices_;
    std::vector<Edge> edges_;
    std::map<VertexId, int> genus_;
    std::map<int, VertexId> marks_;
};

/// Edge set of a spanning tree (a spanning forest on disconnected graphs),
/// sorted by edge id.
struct SpanningTree {
    std::vector<EdgeId> edges;

    bool contains(const EdgeId& e) const
    {
        return std::binary_search(edges.begin(), edges.end(), e);
    }
    friend auto operator<=>(const SpanningTree&, const SpanningTree&) = default;
    friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

/// Element of Z^E; absent edges have coefficient zero. The orientation of
/// each edge is tail -> head, with boundary head - tail.
struct CycleVector {
    std::map<EdgeId, std::int64_t> coeffs;

    std::int64_t operator[](const EdgeId& e) const
    {
        auto it = coeffs.find(e);
        return it == coeffs.end() ? 0 : it->second;
    }
    void add(const EdgeId& e, std::int64_t c)
    {
        if (c == 0) return;
        auto& slot = coeffs[e];
        slot += c;
        if (slot == 0) coeffs.erase(e);
    }
    friend bool operator==(const CycleVector&, const CycleVector&) = default;
};

namespace detail {

/// Disjoint-set forest over vertex indices.
class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1)
    {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

/// Index-based view of a graph used by the enumeration kernels.
struct IndexedGraph {
    std::size_t vertex_count = 0;
    std::vector<std::pair<std::size_t, std::size_t>> ends; // (tail, head) per edge

    explicit IndexedGraph(const AugmentedGraph& g) : vertex_count(g.vertex_count())
    {
        ends.reserve(g.edge_count());
        for (const auto& e : g.edges()) ends.emplace_back(g.vertex_index(e.tail), g.vertex_index(e.head));
    }
};

inline std::size_t component_count(const IndexedGraph& g)
{
    UnionFind uf(g.vertex_count);
    std::size_t components = g.vertex_count;
    for (auto [u, v] : g.ends)
        if (uf.unite(u, v)) --components;
    return components;
}

using EdgeMask = std::uint64_t;

/// All spanning forests as edge bitmasks, in lexicographic order of their
/// sorted edge-index sequences. Branches on edges in index order
/// (include before exclude), pruning any edge that would close a cycle.
inline std::vector<EdgeMask> spanning_forest_masks(const IndexedGraph& g)
{
    const std::size_t m = g.ends.size();
    if (m > 63) throw PreconditionError("spanning tree enumeration supports at most 63 edges");
    const std::size_t target = g.vertex_count - component_count(g);

    std::vector<EdgeMask> out;
    auto recurse = [&](auto&& self, std::size_t i, std::size_t chosen, EdgeMask mask,
                       const std::vector<std::size_t>& label) -> void {
        if (chosen == target) {
            out.push_back(mask);
            return;
        }
        if (i == m || m - i < target - chosen) return;
        const auto [u, v] = g.ends[i];
        if (label[u] != label[v]) {
            std::vector<std::size_t> merged = label;
            const std::size_t from = label[v];
            const std::size_t to = label[u];
            for (auto& l : merged)
                if (l == from) l = to;
            self(self, i + 1, chosen + 1, mask | (EdgeMask{1} << i), merged);
        }
        self(self, i + 1, chosen, mask, label);
    };
    std::vector<std::size_t> label(g.vertex_count);
    std::iota(label.begin(), label.end(), std::size_t{0});
    recurse(recurse, 0, 0, 0, label);
    return out;
}

/// Path between two vertices inside a forest, as signed edge indices
/// (+1 when traversed tail -> head). Empty optional if not connected.
inline std::optional<std::vector<std::pair<std::size_t, int>>>
forest_path(const IndexedGraph& g, EdgeMask forest, std::size_t from, std::size_t to)
{
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(g.vertex_count); // (nbr, edge)
    for (std::size_t i = 0; i < g.ends.size(); ++i) {
        if (!(forest >> i & 1)) continue;
        auto [u, v] = g.ends[i];
        adj[u].emplace_back(v, i);
        adj[v].emplace_back(u, i);
    }
    constexpr std::size_t none = static_cast<std::size_t>(-1);
    std::vector<std::size_t> via(g.vertex_count, none);
    std::vector<std::size_t> prev(g.vertex_count, none);
    std::vector<bool> seen(g.vertex_count, false);
    std::vector<std::size_t> queue{from};
    seen[from] = true;
    for (std::size_t q = 0; q < queue.size(); ++q) {
        const std::size_t x = queue[q];
        for (auto [y, e] : adj[x]) {
            if (seen[y]) continue;
            seen[y] = true;
            via[y] = e;
            prev[y] = x;
            queue.push_back(y);
        }
    }
    if (!seen[to]) return std::nullopt;
    std::vector<std::pair<std::size_t, int>> path;
    for (std::size_t x = to; x != from; x = prev[x]) {
        const std::size_t e = via[x];
        // Traversal goes prev[x] -> x.
        const int sign = (g.ends[e].first == prev[x] && g.ends[e].second == x) ? +1 : -1;
        path.emplace_back(e, sign);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

/// Fundamental cycles of the canonical spanning forest, one per non-forest
/// edge in ascending edge order; coefficients indexed by edge index.
inline std::vector<std::vector<std::int64_t>> fundamental_cycles(const IndexedGraph& g)
{
    const auto forests = spanning_forest_masks(g);
    const EdgeMask forest = forests.front();
    std::vector<std::vector<std::int64_t>> cycles;
    for (std::size_t i = 0; i < g.ends.size(); ++i) {
        if (forest >> i & 1) continue;
        std::vector<std::int64_t> c(g.ends.size(), 0);
        c[i] = 1;
        const auto [tail, head] = g.ends[i];
        if (tail != head) {
            auto path = forest_path(g, forest, head, tail);
            for (auto [e, s] : *path) c[e] += s;
        }
        cycles.push_back(std::move(c));
    }
    return cycles;
}

inline SpanningTree tree_from_mask(const AugmentedGraph& g, EdgeMask mask)
{
    SpanningTree t;
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (mask >> i & 1) t.edges.push_back(g.edges()[i].id);
    return t;
}

inline CycleVector cycle_from_indices(const AugmentedGraph& g, const std::vector<std::int64_t>& c)
{
    CycleVector v;
    for (std::size_t i = 0; i < c.size(); ++i) v.add(g.edges()[i].id, c[i]);
    return v;
}

} // namespace detail

inline std::size_t component_count(const AugmentedGraph& g)
{
    return detail::component_count(detail::IndexedGraph(g));
}

inline bool is_connected(const AugmentedGraph& g)
{
    return component_count(g) <= 1;
}

/// First Betti number |E| - |V| + c(G).
inline std::size_t graph_genus(const AugmentedGraph& g)
{
    return g.edge_count() + component_count(g) - g.vertex_count();
}

/// h + sum of vertex genera.
inline std::size_t total_genus(const AugmentedGraph& g)
{
    std::size_t total = graph_genus(g);
    for (const auto& [v, k] : g.genus()) total += static_cast<std::size_t>(k);
    return total;
}

/// Valence with loops counted twice.
inline std::size_t degree(const AugmentedGraph& g, const VertexId& v)
{
    std::size_t d = 0;
    for (const auto& e : g.edges()) {
        if (e.tail == v) ++d;
        if (e.head == v) ++d;
    }
    return d;
}

inline std::size_t mark_count(const AugmentedGraph& g, const VertexId& v)
{
    std::size_t n = 0;
    for (const auto& [label, w] : g.marks())
        if (w == v) ++n;
    return n;
}

/// Genus-0 vertices need deg + n >= 3, genus-1 vertices need deg + n >= 1.
inline bool is_stable(const AugmentedGraph& g)
{
    for (const auto& v : g.vertices()) {
        const std::size_t valence = degree(g, v) + mark_count(g, v);
        const int genus = g.genus_of(v);
        if (genus == 0 && valence < 3) return false;
        if (genus == 1 && valence < 1) return false;
    }
    return true;
}

/// Spanning subgraph G - F.
inline AugmentedGraph delete_edges(const AugmentedGraph& g, const std::set<EdgeId>& removed)
{
    for (const auto& e : removed)
        if (!g.has_edge(e)) throw PreconditionError("unknown edge id '" + e + "'");
    std::vector<Edge> kept;
    for (const auto& e : g.edges())
        if (!removed.count(e.id)) kept.push_back(e);
    return AugmentedGraph(g.vertices(), std::move(kept), g.genus(), g.marks());
}

/// G/e. A non-loop merges its endpoints into the lexicographically smaller
/// one, adding genera; a loop is removed and its vertex gains one genus.
/// Parallel edges created by the merge are kept.
inline AugmentedGraph contract(const AugmentedGraph& g, const EdgeId& id)
{
    const Edge target = g.edge(id);
    std::map<VertexId, int> genus = g.genus();
    std::vector<Edge> edges;
    edges.reserve(g.edge_count() - 1);

    if (target.is_loop()) {
        genus[target.tail] += 1;
        for (const auto& e : g.edges())
            if (e.id != id) edges.push_back(e);
        return AugmentedGraph(g.vertices(), std::move(edges), std::move(genus), g.marks());
    }

    const VertexId keep = std::min(target.tail, target.head);
    const VertexId gone = std::max(target.tail, target.head);
    auto retarget = [&](const VertexId& v) { return v == gone ? keep : v; };

    std::vector<VertexId> vertices;
    for (const auto& v : g.vertices())
        if (v != gone) vertices.push_back(v);
    genus[keep] += genus[gone];
    genus.erase(gone);
    for (const auto& e : g.edges()) {
        if (e.id == id) continue;
        edges.push_back(Edge{e.id, retarget(e.tail), retarget(e.head)});
    }
    std::map<int, VertexId> marks;
    for (const auto& [label, v] : g.marks()) marks[label] = retarget(v);
    return AugmentedGraph(std::move(vertices), std::move(edges), std::move(genus), std::move(marks));
}

/// G/F, contracting in ascending edge-id order.
inline AugmentedGraph contract_set(const AugmentedGraph& g, const std::set<EdgeId>& edges)
{
    for (const auto& e : edges)
        if (!g.has_edge(e)) throw PreconditionError("unknown edge id '" + e + "'");
    AugmentedGraph result = g;
    for (const auto& e : edges) result = contract(result, e);
    return result;
}

/// All spanning trees (spanning forests with c(G) components when G is
/// disconnected), sorted lexicographically by their sorted edge-id lists.
inline std::vector<SpanningTree> spanning_trees(const AugmentedGraph& g)
{
    const auto masks = detail::spanning_forest_masks(detail::IndexedGraph(g));
    std::vector<SpanningTree> trees;
    trees.reserve(masks.size());
    for (auto m : masks) trees.push_back(detail::tree_from_mask(g, m));
    std::sort(trees.begin(), trees.end());
    return trees;
}

/// Boundary of a chain: for each edge, +c at head and -c at tail.
inline std::map<VertexId, std::int64_t> boundary(const AugmentedGraph& g, const CycleVector& c)
{
    std::map<VertexId, std::int64_t> b;
    for (const auto& [id, coeff] : c.coeffs) {
        const Edge& e = g.edge(id);
        b[e.head] += coeff;
        b[e.tail] -= coeff;
    }
    std::erase_if(b, [](const auto& kv) { return kv.second == 0; });
    return b;
}

inline bool is_cycle(const AugmentedGraph& g, const CycleVector& c)
{
    return boundary(g, c).empty();
}

/// Fundamental cycles of the first spanning tree in canonical order, one
/// per non-tree edge (ascending id), each with coefficient +1 on that edge.
inline std::vector<CycleVector> cycle_basis(const AugmentedGraph& g)
{
    if (!is_connected(g)) throw DisconnectedGraphError("cycle_basis requires a connected graph");
    if (g.vertex_count() == 0) return {};
    std::vector<CycleVector> basis;
    for (const auto& c : detail::fundamental_cycles(detail::IndexedGraph(g))) {
        basis.push_back(detail::cycle_from_indices(g, c));
    }
    return basis;
}

} // namespace canon

#endif // CANON_GRAPH_HPP
