#ifndef CANON_LAYERING_HPP
#define CANON_LAYERING_HPP

#include <canon/errors.hpp>
#include <canon/exact_matrix.hpp>
#include <canon/graph.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace canon {

/// Ordered sequence of nonempty, pairwise disjoint edge sets. The empty
/// sequence is the partition of the empty set.
class OrderedPartition {
public:
    OrderedPartition() = default;

    explicit OrderedPartition(std::vector<std::vector<EdgeId>> parts) : parts_(std::move(parts))
    {
        std::set<EdgeId> seen;
        for (auto& part : parts_) {
            if (part.empty()) throw PreconditionError("ordered partition has an empty layer");
            std::sort(part.begin(), part.end());
            for (const auto& e : part) {
                if (!seen.insert(e).second) {
                    throw PreconditionError("edge '" + e + "' appears in more than one layer");
                }
            }
        }
    }

    /// Single layer holding every edge of `g`.
    static OrderedPartition trivial(const AugmentedGraph& g)
    {
        if (g.edge_count() == 0) return OrderedPartition();
        return OrderedPartition({g.edge_ids()});
    }

    std::size_t depth() const { return parts_.size(); }
    const std::vector<std::vector<EdgeId>>& parts() const { return parts_; }
    const std::vector<EdgeId>& part(std::size_t j) const { return parts_.at(j); }

    /// E_pi, sorted.
    std::vector<EdgeId> support() const
    {
        std::vector<EdgeId> all;
        for (const auto& p : parts_) all.insert(all.end(), p.begin(), p.end());
        std::sort(all.begin(), all.end());
        return all;
    }

    std::optional<std::size_t> layer_of(const EdgeId& e) const
    {
        for (std::size_t j = 0; j < parts_.size(); ++j)
            if (std::binary_search(parts_[j].begin(), parts_[j].end(), e)) return j;
        return std::nullopt;
    }

    /// Union of layers j, j+1, ... (zero-based), i.e. E^{j+1}_pi in one-based terms.
    std::set<EdgeId> tail_from(std::size_t j) const
    {
        std::set<EdgeId> out;
        for (std::size_t i = j; i < parts_.size(); ++i) out.insert(parts_[i].begin(), parts_[i].end());
        return out;
    }

    /// Union of layers 0..j-1.
    std::set<EdgeId> head_before(std::size_t j) const
    {
        std::set<EdgeId> out;
        for (std::size_t i = 0; i < j && i < parts_.size(); ++i) out.insert(parts_[i].begin(), parts_[i].end());
        return out;
    }

    friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

private:
    std::vector<std::vector<EdgeId>> parts_;
};

/// Increasing filtration F_1 < F_2 < ... < F_r, each set sorted.
inline std::vector<std::vector<EdgeId>> to_filtration(const OrderedPartition& p)
{
    std::vector<std::vector<EdgeId>> out;
    std::vector<EdgeId> acc;
    for (const auto& part : p.parts()) {
        acc.insert(acc.end(), part.begin(), part.end());
        std::sort(acc.begin(), acc.end());
        out.push_back(acc);
    }
    return out;
}

/// True iff `coarse` precedes `fine` in the refinement order, i.e. every
/// set of the filtration of `coarse` occurs in the filtration of `fine`.
inline bool refines(const OrderedPartition& fine, const OrderedPartition& coarse)
{
    const auto fine_sets = to_filtration(fine);
    const auto coarse_sets = to_filtration(coarse);
    const std::set<std::vector<EdgeId>> lookup(fine_sets.begin(), fine_sets.end());
    return std::all_of(coarse_sets.begin(), coarse_sets.end(),
                       [&](const auto& s) { return lookup.count(s) > 0; });
}

/// One graded minor gr^j together with its projection on vertices.
struct GradedMinor {
    AugmentedGraph graph;                       ///< edge set equals layer j
    std::map<VertexId, VertexId> vertex_projection; ///< V -> V(gr^j)
    std::size_t genus = 0;                      ///< h^j
};

struct GradedMinorReport {
    std::vector<GradedMinor> layers;
    std::vector<std::size_t> genus_vector;
};

namespace detail {

inline void require_covering(const AugmentedGraph& g, const OrderedPartition& p)
{
    if (p.support() != g.edge_ids()) {
        throw PreconditionError("layering does not cover the edge set exactly");
    }
}

/// Maps every vertex to the smallest vertex id of its component in (V, F).
inline std::map<VertexId, VertexId> component_representatives(const AugmentedGraph& g,
                                                              const std::set<EdgeId>& f)
{
    UnionFind uf(g.vertex_count());
    for (const auto& id : f) {
        const Edge& e = g.edge(id);
        uf.unite(g.vertex_index(e.tail), g.vertex_index(e.head));
    }
    std::map<std::size_t, VertexId> smallest;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const std::size_t root = uf.find(i);
        if (!smallest.count(root)) smallest[root] = g.vertices()[i]; // vertices are sorted
    }
    std::map<VertexId, VertexId> rep;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) rep[g.vertices()[i]] = smallest[uf.find(i)];
    return rep;
}

} // namespace detail

/// gr^j = (V, E^j) / E^{j+1}: earlier layers deleted, later layers contracted.
inline GradedMinorReport graded_minors(const AugmentedGraph& g, const OrderedPartition& p)
{
    detail::require_covering(g, p);
    if (!is_connected(g)) throw DisconnectedGraphError("graded minors require a connected graph");

    GradedMinorReport report;
    for (std::size_t j = 0; j < p.depth(); ++j) {
        const AugmentedGraph upper = delete_edges(g, p.head_before(j));
        const std::set<EdgeId> slower = p.tail_from(j + 1);
        GradedMinor minor;
        minor.graph = contract_set(upper, slower);
        minor.vertex_projection = detail::component_representatives(g, slower);
        minor.genus = graph_genus(minor.graph);
        report.genus_vector.push_back(minor.genus);
        report.layers.push_back(std::move(minor));
    }
    return report;
}

/// (h^1, ..., h^r); sums to the genus of the graph.
inline std::vector<std::size_t> genus_decomposition(const AugmentedGraph& g, const OrderedPartition& p)
{
    return graded_minors(g, p).genus_vector;
}

/// Unions A_1 u ... u A_r of spanning trees A_j of the graded minors.
inline std::vector<SpanningTree> layered_spanning_trees(const AugmentedGraph& g, const OrderedPartition& p)
{
    const auto report = graded_minors(g, p);
    std::vector<SpanningTree> acc{SpanningTree{}};
    for (const auto& layer : report.layers) {
        const auto trees = spanning_trees(layer.graph);
        std::vector<SpanningTree> next;
        next.reserve(acc.size() * trees.size());
        for (const auto& partial : acc)
            for (const auto& t : trees) {
                SpanningTree u = partial;
                u.edges.insert(u.edges.end(), t.edges.begin(), t.edges.end());
                std::sort(u.edges.begin(), u.edges.end());
                next.push_back(std::move(u));
            }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    return acc;
}

/// Cycle basis split into consecutive blocks of sizes h^1, ..., h^r.
struct AdmissibleBasis {
    std::vector<CycleVector> cycles;
    std::vector<std::size_t> block_sizes;

    /// Half-open index range [first, last) of block j.
    std::pair<std::size_t, std::size_t> block_range(std::size_t j) const
    {
        std::size_t first = 0;
        for (std::size_t i = 0; i < j; ++i) first += block_sizes.at(i);
        return {first, first + block_sizes.at(j)};
    }
};

/// Restriction of a cycle to the edges of one layer, i.e. its image under
/// the contraction onto the graded minor.
inline CycleVector project_to_layer(const CycleVector& c, const std::vector<EdgeId>& layer)
{
    CycleVector out;
    for (const auto& [e, k] : c.coeffs)
        if (std::binary_search(layer.begin(), layer.end(), e)) out.add(e, k);
    return out;
}

/// Lifts a canonical cycle basis of each graded minor back to G by closing
/// each chain through paths in the canonical spanning forest of the slower
/// layers.
inline AdmissibleBasis admissible_cycle_basis(const AugmentedGraph& g, const OrderedPartition& p)
{
    const auto report = graded_minors(g, p);
    AdmissibleBasis basis;
    const detail::IndexedGraph full(g);

    for (std::size_t j = 0; j < p.depth(); ++j) {
        const auto& minor = report.layers[j];
        basis.block_sizes.push_back(minor.genus);
        if (minor.genus == 0) continue;

        // Spanning forest of (V, E^{j+1}) expressed as a mask on G's edges.
        const std::set<EdgeId> slower = p.tail_from(j + 1);
        const AugmentedGraph slower_graph = delete_edges(g, p.head_before(j + 1));
        const detail::IndexedGraph slower_indexed(slower_graph);
        const auto slower_forest = detail::spanning_forest_masks(slower_indexed).front();
        detail::EdgeMask forest_in_g = 0;
        for (std::size_t i = 0; i < slower_graph.edge_count(); ++i) {
            if (slower_forest >> i & 1) forest_in_g |= detail::EdgeMask{1} << *g.find_edge(slower_graph.edges()[i].id);
        }

        const detail::IndexedGraph minor_indexed(minor.graph);
        for (const auto& coeffs : detail::fundamental_cycles(minor_indexed)) {
            CycleVector lifted = detail::cycle_from_indices(minor.graph, coeffs);
            const auto defect = boundary(g, lifted);
            for (const auto& [v, b] : defect) {
                const VertexId& root = minor.vertex_projection.at(v);
                auto path = detail::forest_path(full, forest_in_g, g.vertex_index(v), g.vertex_index(root));
                if (!path) throw PreconditionError("internal: lift path missing");
                for (auto [e, s] : *path) lifted.add(g.edges()[e].id, b * s);
            }
            basis.cycles.push_back(std::move(lifted));
        }
    }
    return basis;
}

/// Coordinates of cycles against the fundamental cycles of the canonical
/// spanning forest: the coefficients on the non-forest edges.
inline RationalMatrix fundamental_coordinates(const AugmentedGraph& g, const std::vector<CycleVector>& cycles)
{
    const detail::IndexedGraph indexed(g);
    const auto forest = detail::spanning_forest_masks(indexed).front();
    std::vector<EdgeId> chords;
    for (std::size_t i = 0; i < g.edge_count(); ++i)
        if (!(forest >> i & 1)) chords.push_back(g.edges()[i].id);
    RationalMatrix m(cycles.size(), chords.size());
    for (std::size_t k = 0; k < cycles.size(); ++k)
        for (std::size_t c = 0; c < chords.size(); ++c) m(k, c) = Rational(static_cast<long>(cycles[k][chords[c]]));
    return m;
}

/// True iff `cycles` is a Z-basis of H_1(g, Z).
inline bool is_integral_cycle_basis(const AugmentedGraph& g, const std::vector<CycleVector>& cycles)
{
    if (cycles.size() != graph_genus(g)) return false;
    for (const auto& c : cycles) {
        for (const auto& [e, k] : c.coeffs)
            if (!g.has_edge(e)) return false;
        if (!is_cycle(g, c)) return false;
    }
    const Rational det = determinant(fundamental_coordinates(g, cycles));
    return det == 1 || det == -1;
}

struct AdmissibilityCheck {
    bool ok = false;
    std::string reason;
};

/// Checks the two defining conditions blockwise: block-j cycles are
/// supported on E^j, and their projections form a basis of H_1(gr^j, Z).
/// Also checks that the whole family is a basis of H_1(G, Z).
inline AdmissibilityCheck check_admissible(const AugmentedGraph& g, const OrderedPartition& p,
                                           const AdmissibleBasis& basis)
{
    const auto report = graded_minors(g, p);
    if (basis.block_sizes != report.genus_vector) return {false, "block sizes differ from the genus vector"};
    if (!is_integral_cycle_basis(g, basis.cycles)) return {false, "not a basis of H_1(G, Z)"};
    for (std::size_t j = 0; j < p.depth(); ++j) {
        const auto [first, last] = basis.block_range(j);
        const std::set<EdgeId> allowed = p.tail_from(j);
        std::vector<CycleVector> projected;
        for (std::size_t k = first; k < last; ++k) {
            for (const auto& [e, c] : basis.cycles[k].coeffs) {
                if (!allowed.count(e)) {
                    return {false, "cycle " + std::to_string(k) + " uses edge '" + e + "' from an earlier layer"};
                }
            }
            projected.push_back(project_to_layer(basis.cycles[k], p.part(j)));
        }
        if (!is_integral_cycle_basis(report.layers[j].graph, projected)) {
            return {false, "projections of block " + std::to_string(j + 1) + " do not form a basis"};
        }
    }
    return {true, ""};
}

} // namespace canon

#endif // CANON_LAYERING_HPP
