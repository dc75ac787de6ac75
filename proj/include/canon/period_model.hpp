#ifndef CANON_PERIOD_MODEL_HPP
#define CANON_PERIOD_MODEL_HPP

#include <canon/errors.hpp>
#include <canon/exact_matrix.hpp>
#include <canon/graph.hpp>
#include <canon/laurent.hpp>
#include <canon/layering.hpp>
#include <canon/measures.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace canon {

using DenseMatrix = Eigen::MatrixXd;

/// Rank-one edge forms M_e = c_e c_e^T in a cycle basis, where c_{e,i} is
/// the coefficient of e in the i-th basis cycle.
struct MonodromySet {
    std::size_t genus = 0; ///< h, size of the graph block
    std::size_t pad = 0;   ///< number of zero rows/columns appended in the padded forms
    std::vector<CycleVector> basis;
    std::map<EdgeId, std::vector<std::int64_t>> coefficients;
    std::map<EdgeId, IntegerMatrix> matrices;

    std::size_t size() const { return genus + pad; }

    /// M_e embedded in the top-left corner of a (h + pad) square zero matrix.
    IntegerMatrix padded(const EdgeId& e) const
    {
        const IntegerMatrix& m = matrices.at(e);
        IntegerMatrix out(size(), size());
        for (std::size_t i = 0; i < genus; ++i)
            for (std::size_t j = 0; j < genus; ++j) out(i, j) = m(i, j);
        return out;
    }
};

inline MonodromySet monodromy_from_basis(const AugmentedGraph& g, const std::vector<CycleVector>& basis,
                                         std::size_t surface_genus_pad)
{
    detail::validate_basis(g, basis);
    MonodromySet set;
    set.genus = basis.size();
    set.pad = surface_genus_pad;
    set.basis = basis;
    for (const auto& e : g.edges()) {
        std::vector<std::int64_t> c(basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) c[i] = basis[i][e.id];
        IntegerMatrix m(basis.size(), basis.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < c.size(); ++j) m(i, j) = Integer(static_cast<long>(c[i] * c[j]));
        set.coefficients[e.id] = std::move(c);
        set.matrices[e.id] = std::move(m);
    }
    return set;
}

namespace detail {

inline void require_symmetric(const DenseMatrix& m, const std::string& what)
{
    if (m.rows() != m.cols()) throw PreconditionError(what + " is not square");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = i + 1; j < m.cols(); ++j)
            if (m(i, j) != m(j, i)) throw PreconditionError(what + " is not symmetric");
}

inline RationalMatrix to_rational(const DenseMatrix& m)
{
    RationalMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!std::isfinite(m(i, j))) throw PreconditionError("matrix entry is not finite");
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = from_double(m(i, j));
        }
    return out;
}

inline DenseMatrix to_dense(const RationalMatrix& m)
{
    DenseMatrix out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    return out;
}

/// Exact inverse of a binary64 matrix, rounded once to binary64.
inline DenseMatrix exact_inverse_rounded(const DenseMatrix& m)
{
    return to_dense(inverse(to_rational(m)));
}

inline bool is_spd(const DenseMatrix& m)
{
    if (m.rows() == 0) return true;
    Eigen::LLT<DenseMatrix> llt(m);
    return llt.info() == Eigen::Success;
}

/// 2-norm condition number from the singular values.
inline double condition_number(const DenseMatrix& m)
{
    if (m.rows() == 0) return 1.0;
    Eigen::JacobiSVD<DenseMatrix> svd(m);
    const auto& s = svd.singularValues();
    const double smallest = s(s.size() - 1);
    if (smallest == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / smallest;
}

inline std::vector<Eigen::Index> block_offsets(const std::vector<std::size_t>& sizes)
{
    std::vector<Eigen::Index> offsets{0};
    for (auto s : sizes) offsets.push_back(offsets.back() + static_cast<Eigen::Index>(s));
    return offsets;
}

} // namespace detail

/// Imaginary part of the model period matrix: Im(Lambda_0) plus the edge
/// lengths times the padded monodromy forms.
struct ModelPeriodFamily {
    DenseMatrix im_lambda0;
    MonodromySet monodromy;
    std::map<EdgeId, Laurent> lengths; ///< a zero polynomial means l_e = 0

    ModelPeriodFamily() = default;
    ModelPeriodFamily(DenseMatrix base, MonodromySet mono, std::map<EdgeId, Laurent> ell)
        : im_lambda0(std::move(base)), monodromy(std::move(mono)), lengths(std::move(ell))
    {
        detail::require_symmetric(im_lambda0, "Im(Lambda_0)");
        if (static_cast<std::size_t>(im_lambda0.rows()) != monodromy.size()) {
            throw PreconditionError("Im(Lambda_0) has size " + std::to_string(im_lambda0.rows()) + ", expected "
                                    + std::to_string(monodromy.size()));
        }
        for (const auto& [e, m] : monodromy.matrices)
            if (!lengths.count(e)) throw PreconditionError("edge '" + e + "' has no length function");
        for (const auto& [e, p] : lengths)
            if (!monodromy.matrices.count(e)) throw PreconditionError("length function given for unknown edge '" + e + "'");
    }

    std::map<EdgeId, double> lengths_at(double t) const
    {
        std::map<EdgeId, double> out;
        for (const auto& [e, p] : lengths) out[e] = p.is_zero() ? 0.0 : p.evaluate(t);
        return out;
    }
};

/// Lengths l_e(t) = x_e * t^{-(r-j+1)} for e in layer j of r: every layer
/// grows, earlier layers faster, with scales y_j = t^{-(r-j+1)}.
inline std::map<EdgeId, Laurent> layered_period_lengths(const OrderedPartition& p,
                                                        const std::map<EdgeId, Rational>& x)
{
    std::map<EdgeId, Laurent> lengths;
    const auto r = static_cast<long>(p.depth());
    for (std::size_t j = 0; j < p.depth(); ++j)
        for (const auto& e : p.part(j)) {
            auto it = x.find(e);
            if (it == x.end() || it->second <= 0) throw PreconditionError("edge '" + e + "' has no positive target");
            lengths[e] = Laurent::monomial(it->second, -(r - static_cast<long>(j)));
        }
    return lengths;
}

/// Im(Lambda_0) + sum_e l_e * padded(M_e), no definiteness check.
inline DenseMatrix assemble_period(const DenseMatrix& im_lambda0, const MonodromySet& mono,
                                   const std::map<EdgeId, double>& lengths)
{
    DenseMatrix out = im_lambda0;
    for (const auto& [e, c] : mono.coefficients) {
        const double ell = lengths.at(e);
        for (std::size_t i = 0; i < c.size(); ++i) {
            if (c[i] == 0) continue;
            for (std::size_t j = 0; j < c.size(); ++j) {
                out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))
                    += ell * static_cast<double>(c[i] * c[j]);
            }
        }
    }
    return out;
}

/// Exact counterpart of assemble_period over the rationals.
inline RationalMatrix model_period_exact(const RationalMatrix& im_lambda0, const MonodromySet& mono,
                                         const std::map<EdgeId, Rational>& lengths)
{
    if (im_lambda0.rows() != mono.size() || im_lambda0.cols() != mono.size()) {
        throw PreconditionError("Im(Lambda_0) has the wrong size");
    }
    RationalMatrix out = im_lambda0;
    for (const auto& [e, m] : mono.matrices) {
        const Rational& ell = lengths.at(e);
        for (std::size_t i = 0; i < mono.genus; ++i)
            for (std::size_t j = 0; j < mono.genus; ++j) out(i, j) += ell * Rational(m(i, j));
    }
    return out;
}

/// Im(Omega_t) of the model family; throws NotPositiveDefiniteError when t
/// is too large for the approximation to be positive definite.
inline DenseMatrix model_period(const ModelPeriodFamily& f, double t)
{
    if (!(t > 0)) throw PreconditionError("parameter t must be positive");
    DenseMatrix m = assemble_period(f.im_lambda0, f.monodromy, f.lengths_at(t));
    if (!detail::is_spd(m)) {
        throw NotPositiveDefiniteError("model period matrix is not positive definite at t = " + format_float(t));
    }
    return m;
}

/// Block structure (n_1, ..., n_r), scales y_1 >> ... >> y_r and limit
/// blocks A_kl for the block-asymptotic inverse statement.
struct BlockScaleProfile {
    std::vector<std::size_t> block_sizes;
    std::vector<Laurent> scales;
    DenseMatrix limit;

    BlockScaleProfile() = default;
    BlockScaleProfile(std::vector<std::size_t> sizes, std::vector<Laurent> y, DenseMatrix a)
        : block_sizes(std::move(sizes)), scales(std::move(y)), limit(std::move(a))
    {
        if (block_sizes.empty()) throw PreconditionError("profile has no blocks");
        if (scales.size() != block_sizes.size()) throw PreconditionError("one scale per block is required");
        std::size_t n = 0;
        for (auto s : block_sizes) {
            if (s == 0) throw PreconditionError("profile has an empty block");
            n += s;
        }
        if (static_cast<std::size_t>(limit.rows()) != n || static_cast<std::size_t>(limit.cols()) != n) {
            throw PreconditionError("limit matrix size does not match the block sizes");
        }
        for (const auto& y : scales)
            if (y.is_zero()) throw PreconditionError("scale function is identically zero");
        for (std::size_t k = 0; k + 1 < scales.size(); ++k) {
            const auto ratio = limit_ratio(scales[k + 1], scales[k]);
            if (!ratio || *ratio != 0) {
                throw PreconditionError("scale ratio y_" + std::to_string(k + 2) + "/y_" + std::to_string(k + 1)
                                        + " does not tend to zero");
            }
        }
        for (std::size_t k = 0; k < block_sizes.size(); ++k) {
            if (determinant(detail::to_rational(diagonal_block(k))) == 0) {
                throw SingularMatrixError("limit block " + std::to_string(k + 1) + " is singular");
            }
        }
    }

    std::size_t dimension() const { return static_cast<std::size_t>(limit.rows()); }

    DenseMatrix diagonal_block(std::size_t k) const
    {
        const auto offsets = detail::block_offsets(block_sizes);
        const auto n = static_cast<Eigen::Index>(block_sizes[k]);
        return limit.block(offsets[k], offsets[k], n, n);
    }
};

/// Perturbation eps(t) * R with eps(t) = amplitude * t^exponent and R a
/// fixed matrix of independent uniform entries in [-1, 1] drawn from `seed`.
struct NoiseSpec {
    double amplitude = 1e-3;
    double exponent = 1.0;
    std::uint64_t seed = 0;
};

inline DenseMatrix noise_matrix(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DenseMatrix r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < r.rows(); ++i)
        for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = unit(rng);
    return r;
}

/// M(t) with blocks y_{max(k,l)}(t) * (A_kl + eps(t) R_kl).
inline DenseMatrix profile_matrix(const BlockScaleProfile& p, const NoiseSpec& noise, double t)
{
    const auto offsets = detail::block_offsets(p.block_sizes);
    const DenseMatrix r = noise_matrix(p.dimension(), noise.seed);
    const double eps = noise.amplitude * std::pow(t, noise.exponent);
    DenseMatrix m = p.limit + eps * r;
    for (std::size_t k = 0; k < p.block_sizes.size(); ++k)
        for (std::size_t l = 0; l < p.block_sizes.size(); ++l) {
            const double y = p.scales[std::max(k, l)].evaluate(t);
            m.block(offsets[k], offsets[l], static_cast<Eigen::Index>(p.block_sizes[k]),
                    static_cast<Eigen::Index>(p.block_sizes[l])) *= y;
        }
    return m;
}

namespace detail {

inline DenseMatrix checked_inverse(const DenseMatrix& m)
{
    if (m.rows() == 0) return m;
    Eigen::FullPivLU<DenseMatrix> lu(m);
    if (!lu.isInvertible()) throw SingularMatrixError("matrix is numerically singular");
    return lu.inverse();
}

/// Multiplies block (k,l) of `m` by y_{min(k,l)}.
inline DenseMatrix rescale_inverse(DenseMatrix m, const std::vector<std::size_t>& sizes,
                                   const std::vector<double>& y)
{
    const auto offsets = block_offsets(sizes);
    for (std::size_t k = 0; k < sizes.size(); ++k)
        for (std::size_t l = 0; l < sizes.size(); ++l) {
            m.block(offsets[k], offsets[l], static_cast<Eigen::Index>(sizes[k]), static_cast<Eigen::Index>(sizes[l]))
                *= y[std::min(k, l)];
        }
    return m;
}

/// Inverse after symmetric scaling by y_k^{-1/2} on block k, which brings
/// every block to unit size. Returns the inverse and the condition number
/// of the scaled matrix.
inline std::pair<DenseMatrix, double> equilibrated_inverse(const DenseMatrix& m, const std::vector<std::size_t>& sizes,
                                                           const std::vector<double>& y)
{
    const auto offsets = block_offsets(sizes);
    Eigen::VectorXd d(m.rows());
    for (std::size_t k = 0; k < sizes.size(); ++k)
        d.segment(offsets[k], static_cast<Eigen::Index>(sizes[k])).setConstant(1.0 / std::sqrt(y[k]));
    const DenseMatrix scaled = d.asDiagonal() * m * d.asDiagonal();
    const double cond = condition_number(scaled);
    if (!std::isfinite(cond)) return {DenseMatrix(), cond};
    const DenseMatrix inv = d.asDiagonal() * checked_inverse(scaled) * d.asDiagonal();
    return {inv, cond};
}

} // namespace detail

/// Inverse by the block recursion of the Schur-complement argument: split
/// off the first block, invert the remaining (r-1)-block matrix and its
/// Schur complement recursively.
inline DenseMatrix schur_recursive_inverse(const DenseMatrix& m, const std::vector<std::size_t>& sizes)
{
    if (sizes.size() <= 1) return detail::checked_inverse(m);
    const auto n1 = static_cast<Eigen::Index>(sizes.front());
    const Eigen::Index rest = m.rows() - n1;
    const std::vector<std::size_t> tail(sizes.begin() + 1, sizes.end());

    const DenseMatrix p11 = m.topLeftCorner(n1, n1);
    const DenseMatrix p12 = m.topRightCorner(n1, rest);
    const DenseMatrix p21 = m.bottomLeftCorner(rest, n1);
    const DenseMatrix p22 = m.bottomRightCorner(rest, rest);

    const DenseMatrix p22_inv = schur_recursive_inverse(p22, tail);
    const DenseMatrix s_inv = detail::checked_inverse(p11 - p12 * p22_inv * p21);
    const DenseMatrix p11_inv = detail::checked_inverse(p11);
    const DenseMatrix psi22 = schur_recursive_inverse(p22 - p21 * p11_inv * p12, tail);

    DenseMatrix out(m.rows(), m.cols());
    out.topLeftCorner(n1, n1) = s_inv;
    out.topRightCorner(n1, rest) = -s_inv * p12 * p22_inv;
    out.bottomLeftCorner(rest, n1) = -p22_inv * p21 * s_inv;
    out.bottomRightCorner(rest, rest) = psi22;
    return out;
}

inline constexpr double condition_guard = 1e12;

struct InverseLemmaPoint {
    double t = 0;
    bool flagged = false;              ///< condition guard tripped; nothing compared
    double condition = 0;              ///< of the block-equilibrated matrix
    std::vector<double> diagonal_deviation; ///< ||B_kk(t) - A_kk^{-1}||_F per block
    double max_diagonal_deviation = 0;
    double max_offdiagonal = 0;        ///< largest |entry| of rescaled off-diagonal blocks
    double schur_discrepancy = 0;      ///< max entrywise |direct - recursive| after rescaling
};

struct InverseLemmaReport {
    std::vector<DenseMatrix> targets; ///< A_kk^{-1}, computed exactly then rounded
    std::vector<InverseLemmaPoint> points;
};

inline InverseLemmaReport verify_inverse_lemma(const BlockScaleProfile& p, const NoiseSpec& noise,
                                               const std::vector<double>& grid)
{
    const auto offsets = detail::block_offsets(p.block_sizes);
    const std::size_t r = p.block_sizes.size();
    InverseLemmaReport report;
    for (std::size_t k = 0; k < r; ++k) report.targets.push_back(detail::exact_inverse_rounded(p.diagonal_block(k)));

    for (double t : grid) {
        if (!(t > 0)) throw PreconditionError("parameter grid contains a non-positive value");
        std::vector<double> y;
        for (const auto& s : p.scales) y.push_back(s.evaluate(t));
        const DenseMatrix m = profile_matrix(p, noise, t);

        InverseLemmaPoint point;
        point.t = t;
        auto [inv, cond] = detail::equilibrated_inverse(m, p.block_sizes, y);
        point.condition = cond;
        if (!(cond <= condition_guard)) {
            point.flagged = true;
            report.points.push_back(std::move(point));
            continue;
        }
        const DenseMatrix direct = detail::rescale_inverse(inv, p.block_sizes, y);
        const DenseMatrix recursive = detail::rescale_inverse(schur_recursive_inverse(m, p.block_sizes),
                                                              p.block_sizes, y);
        point.schur_discrepancy = (direct - recursive).cwiseAbs().maxCoeff();
        for (std::size_t k = 0; k < r; ++k) {
            const auto nk = static_cast<Eigen::Index>(p.block_sizes[k]);
            const double dev = (direct.block(offsets[k], offsets[k], nk, nk) - report.targets[k]).norm();
            point.diagonal_deviation.push_back(dev);
            point.max_diagonal_deviation = std::max(point.max_diagonal_deviation, dev);
            for (std::size_t l = 0; l < r; ++l) {
                if (l == k) continue;
                const auto nl = static_cast<Eigen::Index>(p.block_sizes[l]);
                point.max_offdiagonal = std::max(point.max_offdiagonal,
                                                 direct.block(offsets[k], offsets[l], nk, nl).cwiseAbs().maxCoeff());
            }
        }
        report.points.push_back(std::move(point));
    }
    return report;
}

struct GradedInversePoint {
    double t = 0;
    bool flagged = false;
    std::string reason;                  ///< why the point was flagged
    double condition = 0;
    std::vector<double> scales;          ///< y_1(t), ..., y_r(t)
    std::vector<double> block_deviation; ///< per layer with h^k > 0, Frobenius norm
    double pad_deviation = 0;            ///< max entrywise deviation of the pad block
    double max_offdiagonal = 0;
};

struct GradedInverseReport {
    std::vector<std::size_t> genus_vector;
    std::vector<DenseMatrix> targets; ///< (M^k_{pi,x})^{-1} per layer (empty when h^k = 0)
    DenseMatrix pad_target;           ///< inverse of the pad block of Im(Lambda_0)
    std::vector<GradedInversePoint> points;
};

namespace detail {

/// The scales y_j = sum_{pi_j} l_e, after checking l_e = x_e * y_j exactly.
inline std::vector<Laurent> layer_scales(const ModelPeriodFamily& f, const OrderedPartition& p,
                                         const std::map<EdgeId, Rational>& x)
{
    std::vector<Laurent> scales;
    for (std::size_t j = 0; j < p.depth(); ++j) {
        Laurent y;
        for (const auto& e : p.part(j)) y = y + f.lengths.at(e);
        for (const auto& e : p.part(j)) {
            auto it = x.find(e);
            if (it == x.end() || it->second <= 0) throw PreconditionError("edge '" + e + "' has no positive target");
            if (f.lengths.at(e) != Laurent::constant(it->second) * y) {
                throw PreconditionError("length of edge '" + e + "' is not x_e times the layer scale");
            }
        }
        scales.push_back(y);
    }
    for (std::size_t j = 0; j + 1 < scales.size(); ++j) {
        const auto ratio = limit_ratio(scales[j + 1], scales[j]);
        if (!ratio || *ratio != 0) {
            throw PreconditionError("layer scale y_" + std::to_string(j + 2) + " does not vanish relative to y_"
                                    + std::to_string(j + 1));
        }
    }
    if (!scales.empty() && f.monodromy.pad > 0 && scales.back().lowest_exponent() >= 0) {
        throw PreconditionError("the last layer scale does not dominate the pad scale 1");
    }
    return scales;
}

} // namespace detail

/// Rescaled blocks of Im(Omega_t)^{-1} against their predicted limits: the
/// inverses of the graded matrices M^k_{pi,x} and of the pad block.
inline GradedInverseReport graded_inverse_limits(const ModelPeriodFamily& f, const AugmentedGraph& g,
                                                 const OrderedPartition& p, const std::map<EdgeId, Rational>& x,
                                                 const std::vector<double>& grid)
{
    const auto minors = graded_minors(g, p);
    const MonodromySet& mono = f.monodromy;
    const AdmissibleBasis basis{mono.basis, minors.genus_vector};
    if (const auto check = check_admissible(g, p, basis); !check.ok) {
        throw InvalidBasisError("monodromy basis is not admissible: " + check.reason);
    }
    const std::vector<Laurent> scales = detail::layer_scales(f, p, x);

    GradedInverseReport report;
    report.genus_vector = minors.genus_vector;
    for (std::size_t k = 0; k < p.depth(); ++k) {
        if (minors.genus_vector[k] == 0) {
            report.targets.emplace_back();
            continue;
        }
        const auto [first, last] = basis.block_range(k);
        std::vector<CycleVector> projected;
        for (std::size_t i = first; i < last; ++i) projected.push_back(project_to_layer(mono.basis[i], p.part(k)));
        std::map<EdgeId, Rational> lengths;
        for (const auto& e : p.part(k)) lengths[e] = x.at(e);
        const GramMatrix gm = gram_matrices(MetricGraph(minors.layers[k].graph, lengths), projected);
        report.targets.push_back(detail::to_dense(inverse(gm.m_ell)));
    }
    const auto pad = static_cast<Eigen::Index>(mono.pad);
    const DenseMatrix pad_block = f.im_lambda0.bottomRightCorner(pad, pad);
    if (pad > 0 && !detail::is_spd(pad_block)) {
        throw NotPositiveDefiniteError("pad block of Im(Lambda_0) is not positive definite");
    }
    report.pad_target = detail::exact_inverse_rounded(pad_block);

    // Nonempty blocks only; the pad forms a final block of scale 1.
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> layer_of_block;
    for (std::size_t k = 0; k < p.depth(); ++k)
        if (minors.genus_vector[k] > 0) {
            sizes.push_back(minors.genus_vector[k]);
            layer_of_block.push_back(k);
        }
    if (pad > 0) sizes.push_back(mono.pad);
    const auto offsets = detail::block_offsets(sizes);

    for (double t : grid) {
        if (!(t > 0)) throw PreconditionError("parameter grid contains a non-positive value");
        GradedInversePoint point;
        point.t = t;
        for (const auto& s : scales) point.scales.push_back(s.evaluate(t));
        std::vector<double> y;
        for (auto k : layer_of_block) y.push_back(point.scales[k]);
        if (pad > 0) y.push_back(1.0);

        const DenseMatrix m = assemble_period(f.im_lambda0, mono, f.lengths_at(t));
        if (!detail::is_spd(m)) {
            point.flagged = true;
            point.reason = "not positive definite";
            report.points.push_back(std::move(point));
            continue;
        }
        auto [inv, cond] = detail::equilibrated_inverse(m, sizes, y);
        point.condition = cond;
        if (!(cond <= condition_guard)) {
            point.flagged = true;
            point.reason = "condition number above guard";
            report.points.push_back(std::move(point));
            continue;
        }
        const DenseMatrix rescaled = detail::rescale_inverse(inv, sizes, y);
        for (std::size_t b = 0; b < layer_of_block.size(); ++b) {
            const auto n = static_cast<Eigen::Index>(sizes[b]);
            point.block_deviation.push_back(
                (rescaled.block(offsets[b], offsets[b], n, n) - report.targets[layer_of_block[b]]).norm());
        }
        if (pad > 0) point.pad_deviation = (rescaled.bottomRightCorner(pad, pad) - report.pad_target).cwiseAbs().maxCoeff();
        for (std::size_t a = 0; a < sizes.size(); ++a)
            for (std::size_t b = 0; b < sizes.size(); ++b) {
                if (a == b) continue;
                const DenseMatrix blk = rescaled.block(offsets[a], offsets[b], static_cast<Eigen::Index>(sizes[a]),
                                                       static_cast<Eigen::Index>(sizes[b]));
                point.max_offdiagonal = std::max(point.max_offdiagonal, blk.cwiseAbs().maxCoeff());
            }
        report.points.push_back(std::move(point));
    }
    return report;
}

} // namespace canon

#endif // CANON_PERIOD_MODEL_HPP
