#ifndef CANON_MEASURES_HPP
#define CANON_MEASURES_HPP

#include <canon/errors.hpp>
#include <canon/exact_matrix.hpp>
#include <canon/graph.hpp>
#include <canon/layering.hpp>
#include <canon/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace canon {

/// Graph plus a strictly positive rational length on every edge.
struct MetricGraph {
    AugmentedGraph graph;
    std::map<EdgeId, Rational> lengths;

    MetricGraph() = default;
    MetricGraph(AugmentedGraph g, std::map<EdgeId, Rational> ell)
        : graph(std::move(g)), lengths(std::move(ell))
    {
        for (const auto& e : graph.edges()) {
            auto it = lengths.find(e.id);
            if (it == lengths.end()) throw PreconditionError("edge '" + e.id + "' has no length");
            if (it->second <= 0) throw PreconditionError("edge '" + e.id + "' has a non-positive length");
        }
        for (const auto& [id, len] : lengths)
            if (!graph.has_edge(id)) throw PreconditionError("length given for unknown edge '" + id + "'");
    }

    const Rational& length(const EdgeId& e) const
    {
        auto it = lengths.find(e);
        if (it == lengths.end()) throw PreconditionError("unknown edge id '" + e + "'");
        return it->second;
    }

    friend bool operator==(const MetricGraph&, const MetricGraph&) = default;
};

/// Metric graph with a layering whose layers each have total length one.
struct TropicalCurve {
    MetricGraph metric;
    OrderedPartition layering;

    TropicalCurve() = default;
    TropicalCurve(MetricGraph m, OrderedPartition p) : metric(std::move(m)), layering(std::move(p))
    {
        if (layering.support() != metric.graph.edge_ids()) {
            throw PreconditionError("layering does not cover the edge set exactly");
        }
        for (std::size_t j = 0; j < layering.depth(); ++j) {
            Rational sum = 0;
            for (const auto& e : layering.part(j)) sum += metric.length(e);
            if (sum != 1) {
                throw PreconditionError("layer " + std::to_string(j + 1) + " has total length "
                                        + to_string(sum) + ", expected 1");
            }
        }
    }
};

/// Edge masses mu(e) (density mu(e)/l_e against arc length) plus integer
/// vertex atoms g(v).
struct EdgeMeasure {
    std::map<EdgeId, Rational> edge_coeffs;
    std::map<VertexId, int> vertex_atoms;

    Rational total_mass() const
    {
        Rational total = 0;
        for (const auto& [e, c] : edge_coeffs) total += c;
        for (const auto& [v, a] : vertex_atoms) total += a;
        return total;
    }

    Rational edge_mass() const
    {
        Rational total = 0;
        for (const auto& [e, c] : edge_coeffs) total += c;
        return total;
    }

    Rational density(const EdgeId& e, const Rational& length) const
    {
        return edge_coeffs.at(e) / length;
    }

    friend bool operator==(const EdgeMeasure&, const EdgeMeasure&) = default;
};

/// M_l together with the per-edge rank-one forms M_e in a fixed basis.
struct GramMatrix {
    std::vector<CycleVector> basis;
    std::map<EdgeId, RationalMatrix> per_edge;
    RationalMatrix m_ell;
};

namespace detail {

inline void require_connected(const AugmentedGraph& g)
{
    if (!is_connected(g)) throw DisconnectedGraphError("measure operations require a connected graph");
}

inline std::map<VertexId, int> genus_atoms(const AugmentedGraph& g)
{
    std::map<VertexId, int> atoms;
    for (const auto& [v, k] : g.genus())
        if (k != 0) atoms[v] = k;
    return atoms;
}

/// Foster coefficients through spanning forests; valid for disconnected
/// graphs, where the forest weights factor over components.
inline std::map<EdgeId, Rational> foster_over_forests(const AugmentedGraph& g,
                                                      const std::map<EdgeId, Rational>& lengths)
{
    const std::size_t m = g.edge_count();
    std::vector<Rational> ell(m);
    for (std::size_t i = 0; i < m; ++i) ell[i] = lengths.at(g.edges()[i].id);

    std::vector<Rational> missing(m, Rational(0));
    Rational total = 0;
    for (const auto mask : spanning_forest_masks(IndexedGraph(g))) {
        Rational weight = 1;
        for (std::size_t i = 0; i < m; ++i)
            if (!(mask >> i & 1)) weight *= ell[i];
        total += weight;
        for (std::size_t i = 0; i < m; ++i)
            if (!(mask >> i & 1)) missing[i] += weight;
    }
    std::map<EdgeId, Rational> mu;
    for (std::size_t i = 0; i < m; ++i) {
        Rational q = missing[i] / total;
        q.canonicalize();
        mu[g.edges()[i].id] = q;
    }
    return mu;
}

inline void validate_basis(const AugmentedGraph& g, const std::vector<CycleVector>& basis)
{
    const std::size_t h = graph_genus(g);
    if (basis.size() != h) {
        throw InvalidBasisError("basis has " + std::to_string(basis.size()) + " vectors, genus is "
                                + std::to_string(h));
    }
    RationalMatrix coords(basis.size(), g.edge_count());
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (const auto& [e, c] : basis[k].coeffs) {
            auto idx = g.find_edge(e);
            if (!idx) throw InvalidBasisError("basis vector uses unknown edge '" + e + "'");
            coords(k, *idx) = Rational(static_cast<long>(c));
        }
        if (!is_cycle(g, basis[k])) throw InvalidBasisError("basis vector " + std::to_string(k) + " is not a cycle");
    }
    if (rank(coords) != h) throw InvalidBasisError("basis vectors are linearly dependent");
}

} // namespace detail

/// mu(e) = sum over trees avoiding e of w(T), divided by the sum of all
/// w(T), where w(T) is the product of lengths of edges outside T.
inline EdgeMeasure foster_by_trees(const MetricGraph& m)
{
    detail::require_connected(m.graph);
    return EdgeMeasure{detail::foster_over_forests(m.graph, m.lengths), detail::genus_atoms(m.graph)};
}

/// mu(e) = q_l(P e) / l_e with P the l-orthogonal projection of R^E onto the
/// cycle space. The cycle space is taken as the rational kernel of the
/// incidence matrix and the projection is found from the normal equations.
inline EdgeMeasure foster_by_projection(const MetricGraph& m)
{
    const AugmentedGraph& g = m.graph;
    detail::require_connected(g);
    const std::size_t n_e = g.edge_count();

    RationalMatrix incidence(g.vertex_count(), n_e);
    for (std::size_t i = 0; i < n_e; ++i) {
        const Edge& e = g.edges()[i];
        incidence(g.vertex_index(e.head), i) += 1;
        incidence(g.vertex_index(e.tail), i) -= 1;
    }
    const RationalMatrix kernel = nullspace(incidence); // n_e x h
    const std::size_t h = kernel.cols();

    EdgeMeasure out;
    out.vertex_atoms = detail::genus_atoms(g);
    if (h == 0) {
        for (const auto& e : g.edges()) out.edge_coeffs[e.id] = 0;
        return out;
    }

    std::vector<Rational> ell(n_e);
    for (std::size_t i = 0; i < n_e; ++i) ell[i] = m.length(g.edges()[i].id);

    RationalMatrix gram(h, h);
    for (std::size_t a = 0; a < h; ++a)
        for (std::size_t b = 0; b < h; ++b)
            for (std::size_t i = 0; i < n_e; ++i) gram(a, b) += ell[i] * kernel(i, a) * kernel(i, b);

    // Column i: <unit vector e_i, k_a>_l = l_i * kernel(i, a).
    RationalMatrix rhs(h, n_e);
    for (std::size_t i = 0; i < n_e; ++i)
        for (std::size_t a = 0; a < h; ++a) rhs(a, i) = ell[i] * kernel(i, a);
    const RationalMatrix coeffs = solve(gram, rhs);
    const RationalMatrix projected = kernel * coeffs; // column i is P(e_i)

    for (std::size_t i = 0; i < n_e; ++i) {
        Rational q = 0;
        for (std::size_t f = 0; f < n_e; ++f) q += ell[f] * projected(f, i) * projected(f, i);
        q /= ell[i];
        q.canonicalize();
        out.edge_coeffs[g.edges()[i].id] = q;
    }
    return out;
}

/// M_e(i, j) = gamma_i(e) gamma_j(e) and M_l = sum l_e M_e for the given
/// basis of H_1. Throws InvalidBasisError for anything that is not a basis.
inline GramMatrix gram_matrices(const MetricGraph& m, const std::vector<CycleVector>& basis)
{
    const AugmentedGraph& g = m.graph;
    detail::validate_basis(g, basis);
    const std::size_t h = basis.size();

    GramMatrix out;
    out.basis = basis;
    out.m_ell = RationalMatrix(h, h);
    for (const auto& e : g.edges()) {
        RationalMatrix me(h, h);
        for (std::size_t i = 0; i < h; ++i)
            for (std::size_t j = 0; j < h; ++j) me(i, j) = Rational(static_cast<long>(basis[i][e.id] * basis[j][e.id]));
        out.m_ell = out.m_ell + m.length(e.id) * me;
        out.per_edge.emplace(e.id, std::move(me));
    }
    if (!is_positive_definite(out.m_ell)) throw NotPositiveDefiniteError("M_l is not positive definite");
    return out;
}

/// mu(e) = l_e * sum_{i,j} M_l^{-1}(i, j) gamma_i(e) gamma_j(e), with the
/// inverse computed by fraction-free elimination.
inline EdgeMeasure foster_by_matrix(const MetricGraph& m, const std::vector<CycleVector>& basis)
{
    detail::require_connected(m.graph);
    const GramMatrix gm = gram_matrices(m, basis);
    const RationalMatrix inv = inverse(gm.m_ell);
    const std::size_t h = basis.size();

    EdgeMeasure out;
    out.vertex_atoms = detail::genus_atoms(m.graph);
    for (const auto& e : m.graph.edges()) {
        Rational s = 0;
        for (std::size_t i = 0; i < h; ++i) {
            const auto gi = basis[i][e.id];
            if (gi == 0) continue;
            for (std::size_t j = 0; j < h; ++j) {
                const auto gj = basis[j][e.id];
                if (gj != 0) s += inv(i, j) * Rational(static_cast<long>(gi * gj));
            }
        }
        s *= m.length(e.id);
        s.canonicalize();
        out.edge_coeffs[e.id] = s;
    }
    return out;
}

inline EdgeMeasure foster_by_matrix(const MetricGraph& m)
{
    detail::require_connected(m.graph);
    return foster_by_matrix(m, cycle_basis(m.graph));
}

/// Vertex atoms g(v) plus, on each layer, the Foster coefficients of the
/// corresponding graded minor with the restricted lengths. Disconnected
/// graded minors are handled componentwise.
inline EdgeMeasure tropical_canonical_measure(const TropicalCurve& t)
{
    const AugmentedGraph& g = t.metric.graph;
    const auto report = graded_minors(g, t.layering);
    EdgeMeasure out;
    out.vertex_atoms = detail::genus_atoms(g);
    for (std::size_t j = 0; j < report.layers.size(); ++j) {
        std::map<EdgeId, Rational> restricted;
        for (const auto& e : t.layering.part(j)) restricted[e] = t.metric.length(e);
        for (auto& [e, mu] : detail::foster_over_forests(report.layers[j].graph, restricted)) {
            out.edge_coeffs[e] = std::move(mu);
        }
    }
    return out;
}

/// Push-forward of the hybrid canonical measure to the tropical curve. The
/// vertex atom g(v) records the total mass of the Arakelov-Bergman measure
/// on the component C_v, so the numbers agree with the tropical measure.
inline EdgeMeasure hybrid_mass_profile(const TropicalCurve& t)
{
    return tropical_canonical_measure(t);
}

/// Piecewise-linear function on a metric graph. On edge e the function
/// interpolates linearly between f(tail) at 0, the breakpoints in
/// increasing position, and f(head) at l_e. A breakpoint placed exactly at
/// 0 or l_e overrides the vertex value for that edge only.
struct PiecewiseLinearFunction {
    struct Breakpoint {
        Rational position;
        Rational value;
    };

    std::map<VertexId, Rational> vertex_values;
    std::map<EdgeId, std::vector<Breakpoint>> breakpoints;
};

namespace detail {

/// Exact integral of f over edge e (trapezoid rule is exact on linear pieces).
inline Rational edge_integral(const MetricGraph& m, const PiecewiseLinearFunction& f, const Edge& e)
{
    const Rational& len = m.length(e.id);
    auto value_at = [&](const VertexId& v) {
        auto it = f.vertex_values.find(v);
        if (it == f.vertex_values.end()) throw PreconditionError("test function has no value at vertex '" + v + "'");
        return it->second;
    };

    std::vector<std::pair<Rational, Rational>> pts;
    pts.emplace_back(Rational(0), value_at(e.tail));
    if (auto it = f.breakpoints.find(e.id); it != f.breakpoints.end()) {
        std::vector<PiecewiseLinearFunction::Breakpoint> bps = it->second;
        std::stable_sort(bps.begin(), bps.end(),
                         [](const auto& a, const auto& b) { return a.position < b.position; });
        for (const auto& bp : bps) {
            if (bp.position < 0 || bp.position > len) {
                throw PreconditionError("breakpoint on edge '" + e.id + "' lies outside [0, l_e]");
            }
            if (bp.position == 0) {
                pts.front().second = bp.value;
            } else {
                pts.emplace_back(bp.position, bp.value);
            }
        }
    }
    if (pts.back().first == len) {
        // Endpoint override already present.
    } else {
        pts.emplace_back(len, value_at(e.head));
    }

    Rational integral = 0;
    for (std::size_t k = 1; k < pts.size(); ++k) {
        integral += (pts[k].first - pts[k - 1].first) * (pts[k].second + pts[k - 1].second) / 2;
    }
    return integral;
}

} // namespace detail

/// Integral of f against mu: sum_e (mu(e)/l_e) * int_e f + sum_v atom_v f(v).
inline Rational integrate(const MetricGraph& m, const EdgeMeasure& mu, const PiecewiseLinearFunction& f)
{
    for (const auto& [e, bps] : f.breakpoints)
        if (!m.graph.has_edge(e)) throw PreconditionError("breakpoints given for unknown edge '" + e + "'");
    Rational total = 0;
    for (const auto& e : m.graph.edges()) {
        const Rational edge_part = detail::edge_integral(m, f, e);
        auto it = mu.edge_coeffs.find(e.id);
        if (it == mu.edge_coeffs.end()) continue;
        total += it->second / m.length(e.id) * edge_part;
    }
    for (const auto& [v, atom] : mu.vertex_atoms) {
        if (atom == 0) continue;
        auto it = f.vertex_values.find(v);
        if (it == f.vertex_values.end()) throw PreconditionError("test function has no value at vertex '" + v + "'");
        total += atom * it->second;
    }
    total.canonicalize();
    return total;
}

} // namespace canon

#endif // CANON_MEASURES_HPP
