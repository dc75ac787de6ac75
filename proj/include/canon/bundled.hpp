#ifndef CANON_BUNDLED_HPP
#define CANON_BUNDLED_HPP

#include <canon/degeneration.hpp>
#include <canon/graph.hpp>
#include <canon/layering.hpp>
#include <canon/period_model.hpp>

#include <map>

namespace canon::bundled {

/// Two vertices joined by three parallel edges e1, e2, e3.
inline AugmentedGraph theta()
{
    return AugmentedGraph({"v1", "v2"}, {{"e1", "v1", "v2"}, {"e2", "v1", "v2"}, {"e3", "v1", "v2"}}, {}, {});
}

/// Triangle with edges e1 = v1v2, e2 = v2v3, e3 = v3v1.
inline AugmentedGraph k3()
{
    return AugmentedGraph({"v1", "v2", "v3"}, {{"e1", "v1", "v2"}, {"e2", "v2", "v3"}, {"e3", "v3", "v1"}}, {}, {});
}

/// The layering ({e1}, {e2, e3}) used with both bundled graphs.
inline OrderedPartition layering()
{
    return OrderedPartition({{"e1"}, {"e2", "e3"}});
}

/// Normalized target lengths x = (1, 1/2, 1/2).
inline std::map<EdgeId, Rational> target()
{
    return {{"e1", Rational(1)}, {"e2", Rational(1, 2)}, {"e3", Rational(1, 2)}};
}

/// l_t = (1, t/2, t/2) on the theta graph.
inline LengthFamily theta_family()
{
    return layered_monomial_family(theta(), layering(), target());
}

/// l_t = (1, t/2, t/2) on the triangle.
inline LengthFamily k3_family()
{
    return layered_monomial_family(k3(), layering(), target());
}

/// Theta model period family with scales y = (t^-2, t^-1) in the admissible
/// basis of the bundled layering, and Im(Lambda_0) given by `lambda0`
/// (size 2 + pad).
inline ModelPeriodFamily theta_period_family(const DenseMatrix& lambda0)
{
    const AugmentedGraph g = theta();
    const auto basis = admissible_cycle_basis(g, layering());
    if (static_cast<std::size_t>(lambda0.rows()) < basis.cycles.size()) {
        throw PreconditionError("Im(Lambda_0) is smaller than the graph block");
    }
    const auto pad = static_cast<std::size_t>(lambda0.rows()) - basis.cycles.size();
    return ModelPeriodFamily(lambda0, monodromy_from_basis(g, basis.cycles, pad),
                             layered_period_lengths(layering(), target()));
}

} // namespace canon::bundled

#endif // CANON_BUNDLED_HPP
