#ifndef CANON_DEGENERATION_HPP
#define CANON_DEGENERATION_HPP

#include <canon/errors.hpp>
#include <canon/graph.hpp>
#include <canon/laurent.hpp>
#include <canon/layering.hpp>
#include <canon/measures.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace canon {

/// One-parameter family of edge lengths l_e(t) together with the point of
/// the tropical moduli space it is expected to converge to as t -> 0+.
struct LengthFamily {
    AugmentedGraph graph;
    std::map<EdgeId, Laurent> param_lengths;
    OrderedPartition target_layering;
    std::map<EdgeId, Rational> target_point;

    LengthFamily() = default;
    LengthFamily(AugmentedGraph g, std::map<EdgeId, Laurent> lengths, OrderedPartition layering,
                 std::map<EdgeId, Rational> x)
        : graph(std::move(g)), param_lengths(std::move(lengths)), target_layering(std::move(layering)),
          target_point(std::move(x))
    {
        for (const auto& e : graph.edges()) {
            auto it = param_lengths.find(e.id);
            if (it == param_lengths.end() || it->second.is_zero()) {
                throw PreconditionError("edge '" + e.id + "' has no length function");
            }
        }
        for (const auto& [id, p] : param_lengths)
            if (!graph.has_edge(id)) throw PreconditionError("length function given for unknown edge '" + id + "'");
        detail::require_covering(graph, target_layering);
        for (const auto& [id, x_e] : target_point)
            if (!graph.has_edge(id)) throw PreconditionError("target given for unknown edge '" + id + "'");
        for (std::size_t j = 0; j < target_layering.depth(); ++j) {
            Rational sum = 0;
            for (const auto& e : target_layering.part(j)) {
                auto it = target_point.find(e);
                if (it == target_point.end()) throw PreconditionError("edge '" + e + "' has no target value");
                if (it->second <= 0) throw PreconditionError("target value of edge '" + e + "' is not positive");
                sum += it->second;
            }
            if (sum != 1) {
                throw PreconditionError("target values on layer " + std::to_string(j + 1) + " sum to "
                                        + to_string(sum) + ", expected 1");
            }
        }
    }

    std::map<EdgeId, Rational> lengths_at(const Rational& t) const
    {
        std::map<EdgeId, Rational> out;
        for (const auto& [e, p] : param_lengths) out[e] = p(t);
        return out;
    }

    MetricGraph metric_at(const Rational& t) const { return MetricGraph(graph, lengths_at(t)); }

    /// The limit tropical curve: lengths x on the target layering.
    TropicalCurve target_curve() const
    {
        return TropicalCurve(MetricGraph(graph, target_point), target_layering);
    }

    /// Total length of layer j as a Laurent polynomial.
    Laurent layer_length(std::size_t j) const
    {
        Laurent sum;
        for (const auto& e : target_layering.part(j)) sum = sum + param_lengths.at(e);
        return sum;
    }
};

/// The family l_e(t) = x_e * t^(j-1) for e in layer j: layer j shrinks at
/// rate t^(j-1) and converges to the point x of the target cone.
inline LengthFamily layered_monomial_family(const AugmentedGraph& g, const OrderedPartition& p,
                                            const std::map<EdgeId, Rational>& x)
{
    std::map<EdgeId, Laurent> lengths;
    for (std::size_t j = 0; j < p.depth(); ++j)
        for (const auto& e : p.part(j)) {
            auto it = x.find(e);
            if (it == x.end()) throw PreconditionError("edge '" + e + "' has no target value");
            if (it->second <= 0) throw PreconditionError("target value of edge '" + e + "' is not positive");
            lengths[e] = Laurent::monomial(it->second, static_cast<long>(j));
        }
    return LengthFamily(g, std::move(lengths), p, x);
}

struct ConvergenceViolation {
    std::string condition; ///< "conv3" (within-layer ratios) or "conv4" (cross-layer ratios)
    std::string message;
};

struct ConvergenceCheck {
    std::vector<ConvergenceViolation> violations;

    bool ok() const { return violations.empty(); }
    explicit operator bool() const { return ok(); }
};

/// Decides convergence of the family to its target symbolically.
/// conv3: l_e / sum_{pi_j} l -> x_e for every e in pi_j.
/// conv4: l_{e'} / l_e -> 0 whenever e' lies in a later layer than e.
inline ConvergenceCheck check_convergence(const LengthFamily& f)
{
    ConvergenceCheck check;
    const OrderedPartition& p = f.target_layering;
    for (std::size_t j = 0; j < p.depth(); ++j) {
        const Laurent total = f.layer_length(j);
        for (const auto& e : p.part(j)) {
            const Rational limit = *limit_ratio(f.param_lengths.at(e), total);
            const Rational& x = f.target_point.at(e);
            if (limit != x) {
                check.violations.push_back(
                    {"conv3", "edge '" + e + "': l_e / (layer " + std::to_string(j + 1) + " length) tends to "
                                  + to_string(limit) + ", target " + to_string(x)});
            }
        }
    }
    for (std::size_t j = 0; j < p.depth(); ++j)
        for (std::size_t k = j + 1; k < p.depth(); ++k)
            for (const auto& e : p.part(j))
                for (const auto& later : p.part(k)) {
                    const auto limit = limit_ratio(f.param_lengths.at(later), f.param_lengths.at(e));
                    if (!limit || *limit != 0) {
                        check.violations.push_back(
                            {"conv4", "edge '" + later + "' (layer " + std::to_string(k + 1)
                                          + ") does not shrink faster than edge '" + e + "' (layer "
                                          + std::to_string(j + 1) + ")"});
                    }
                }
    return check;
}

namespace detail {

inline void require_convergent(const LengthFamily& f)
{
    const auto check = check_convergence(f);
    if (!check.ok()) {
        const auto& v = check.violations.front();
        throw NonConvergentFamilyError("length family violates " + v.condition + ": " + v.message);
    }
}

} // namespace detail

/// lim_{t->0} omega_t(T) * prod_j (sum_{pi_j} l_t)^{-h^j}, where
/// omega_t(T) is the product of l_t(e) over edges outside T.
inline Rational omega_infinity(const SpanningTree& tree, const LengthFamily& f)
{
    detail::require_convergent(f);
    const AugmentedGraph& g = f.graph;
    for (const auto& e : tree.edges)
        if (!g.has_edge(e)) throw PreconditionError("tree uses unknown edge '" + e + "'");
    {
        detail::UnionFind uf(g.vertex_count());
        for (const auto& e : tree.edges) {
            const Edge& edge = g.edge(e);
            if (!uf.unite(g.vertex_index(edge.tail), g.vertex_index(edge.head))) {
                throw PreconditionError("edge set contains a cycle, not a spanning tree");
            }
        }
        if (tree.edges.size() + 1 != g.vertex_count()) {
            throw PreconditionError("edge set is not a spanning tree");
        }
    }

    SpanningTree sorted = tree;
    std::sort(sorted.edges.begin(), sorted.edges.end());
    Laurent weight = Laurent::constant(1);
    for (const auto& e : g.edges())
        if (!sorted.contains(e.id)) weight = weight * f.param_lengths.at(e.id);

    const auto genus = genus_decomposition(g, f.target_layering);
    Laurent normalizer = Laurent::constant(1);
    for (std::size_t j = 0; j < genus.size(); ++j) normalizer = normalizer * pow(f.layer_length(j), genus[j]);

    const auto limit = limit_ratio(weight, normalizer);
    if (!limit) throw NonConvergentFamilyError("normalized tree weight diverges");
    return *limit;
}

/// Foster coefficients along a grid of parameters and their limits.
struct ConvergenceReport {
    std::vector<Rational> grid;
    std::map<EdgeId, std::vector<Rational>> trajectory; ///< mu_t(e) per grid point
    std::map<EdgeId, Rational> targets;                 ///< mu^j(e) of the limit curve
    std::vector<Rational> max_deviation;                ///< max_e |mu_t(e) - target| per grid point
    std::vector<Rational> edge_mass;                    ///< sum_e mu_t(e) per grid point
};

namespace detail {

inline void require_decreasing_grid(const std::vector<Rational>& grid)
{
    if (grid.empty()) throw PreconditionError("parameter grid is empty");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] <= 0) throw PreconditionError("parameter grid contains a non-positive value");
        if (i > 0 && !(grid[i] < grid[i - 1])) {
            throw PreconditionError("parameter grid is not strictly decreasing");
        }
    }
}

} // namespace detail

/// The geometric grid 10^{-1}, ..., 10^{-k}.
inline std::vector<Rational> geometric_grid(int k)
{
    std::vector<Rational> grid;
    for (int i = 1; i <= k; ++i) grid.push_back(pow(Rational(1, 10), i));
    return grid;
}

inline bool is_nonincreasing(const std::vector<Rational>& values)
{
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[i - 1]) return false;
    return true;
}

inline ConvergenceReport limit_foster(const LengthFamily& f, const std::vector<Rational>& grid)
{
    detail::require_convergent(f);
    detail::require_decreasing_grid(grid);

    ConvergenceReport report;
    report.grid = grid;
    report.targets = tropical_canonical_measure(f.target_curve()).edge_coeffs;
    for (const auto& t : grid) {
        const EdgeMeasure mu = foster_by_trees(f.metric_at(t));
        Rational worst = 0;
        for (const auto& [e, c] : mu.edge_coeffs) {
            report.trajectory[e].push_back(c);
            const Rational dev = abs(c - report.targets.at(e));
            if (dev > worst) worst = dev;
        }
        report.max_deviation.push_back(worst);
        report.edge_mass.push_back(mu.edge_mass());
    }
    return report;
}

/// F(t) = int f dmu_t along the grid and F(limit) = int f dmu on the limit
/// tropical curve.
struct ProbeReport {
    std::vector<Rational> grid;
    std::vector<Rational> values;
    Rational limit_value;
    std::vector<Rational> deviations;
};

namespace detail {

/// Places a test function given in normalized arc length s in [0, 1] on a
/// metric graph by scaling each breakpoint position by the edge length.
inline PiecewiseLinearFunction rescale_to_lengths(const PiecewiseLinearFunction& normalized,
                                                  const std::map<EdgeId, Rational>& lengths)
{
    PiecewiseLinearFunction out;
    out.vertex_values = normalized.vertex_values;
    for (const auto& [e, bps] : normalized.breakpoints) {
        auto it = lengths.find(e);
        if (it == lengths.end()) throw PreconditionError("breakpoints given for unknown edge '" + e + "'");
        for (const auto& bp : bps) {
            if (bp.position < 0 || bp.position > 1) {
                throw PreconditionError("normalized breakpoint on edge '" + e + "' lies outside [0, 1]");
            }
            out.breakpoints[e].push_back({bp.position * it->second, bp.value});
        }
    }
    return out;
}

} // namespace detail

/// `test_fn` uses normalized arc-length positions s in [0, 1] on each edge,
/// so the same function is defined on every fiber of the family.
inline ProbeReport continuity_probe(const LengthFamily& f, const PiecewiseLinearFunction& test_fn,
                                    const std::vector<Rational>& grid)
{
    detail::require_convergent(f);
    detail::require_decreasing_grid(grid);

    ProbeReport report;
    report.grid = grid;
    const TropicalCurve limit = f.target_curve();
    report.limit_value = integrate(limit.metric, tropical_canonical_measure(limit),
                                   detail::rescale_to_lengths(test_fn, limit.metric.lengths));
    for (const auto& t : grid) {
        const MetricGraph m = f.metric_at(t);
        const Rational value = integrate(m, foster_by_trees(m), detail::rescale_to_lengths(test_fn, m.lengths));
        report.values.push_back(value);
        report.deviations.push_back(abs(value - report.limit_value));
    }
    return report;
}

} // namespace canon

#endif // CANON_DEGENERATION_HPP
