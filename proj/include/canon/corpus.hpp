#ifndef CANON_CORPUS_HPP
#define CANON_CORPUS_HPP

#include <canon/graph.hpp>
#include <canon/layering.hpp>
#include <canon/measures.hpp>
#include <canon/period_model.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

/// Seeded random inputs for property checks. All generators draw from a
/// caller-owned std::mt19937_64, so a corpus is reproducible from its seed.
namespace canon::corpus {

using Rng = std::mt19937_64;

struct GraphOptions {
    std::size_t max_vertices = 8;
    std::size_t max_edges = 12;
    bool vertex_genus = true; ///< occasionally give vertices genus one
};

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Rational random_rational(Rng& rng, long max_abs_numerator, long max_denominator, bool positive)
{
    const long lo = positive ? 1 : -max_abs_numerator;
    const long num = std::uniform_int_distribution<long>(lo, max_abs_numerator)(rng);
    const long den = std::uniform_int_distribution<long>(1, max_denominator)(rng);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string vertex_name(std::size_t i)
{
    return "v" + std::to_string(i + 1);
}

inline std::string edge_name(std::size_t i)
{
    std::string digits = std::to_string(i + 1);
    if (digits.size() < 2) digits.insert(0, "0");
    return "e" + digits;
}

/// Connected multigraph (loops and parallel edges allowed): a random
/// spanning tree plus random extra edges, ids assigned after shuffling.
inline AugmentedGraph random_connected_multigraph(Rng& rng, const GraphOptions& opt = {})
{
    const std::size_t n = uniform(rng, 1, opt.max_vertices);
    const std::size_t m = uniform(rng, std::max<std::size_t>(n - 1, 1), opt.max_edges);
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    for (std::size_t i = 1; i < n; ++i) ends.emplace_back(uniform(rng, 0, i - 1), i);
    while (ends.size() < m) ends.emplace_back(uniform(rng, 0, n - 1), uniform(rng, 0, n - 1));
    std::shuffle(ends.begin(), ends.end(), rng);

    std::vector<VertexId> vertices;
    std::map<VertexId, int> genus;
    for (std::size_t i = 0; i < n; ++i) {
        vertices.push_back(vertex_name(i));
        if (opt.vertex_genus && uniform(rng, 0, 4) == 0) genus[vertex_name(i)] = 1;
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        auto [a, b] = ends[i];
        if (uniform(rng, 0, 1) == 1) std::swap(a, b);
        edges.push_back(Edge{edge_name(i), vertex_name(a), vertex_name(b)});
    }
    return AugmentedGraph(std::move(vertices), std::move(edges), std::move(genus), {});
}

/// Lengths p/q with 1 <= p, q <= max_part.
inline std::map<EdgeId, Rational> random_lengths(Rng& rng, const AugmentedGraph& g, long max_part = 100)
{
    std::map<EdgeId, Rational> out;
    for (const auto& e : g.edges()) out[e.id] = random_rational(rng, max_part, max_part, true);
    return out;
}

/// Ordered partition of the edges into 1..max_depth nonempty layers.
inline OrderedPartition random_layering(Rng& rng, const AugmentedGraph& g, std::size_t max_depth = 4)
{
    std::vector<EdgeId> ids = g.edge_ids();
    if (ids.empty()) return OrderedPartition();
    std::shuffle(ids.begin(), ids.end(), rng);
    const std::size_t depth = uniform(rng, 1, std::min(max_depth, ids.size()));
    std::vector<std::vector<EdgeId>> parts(depth);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        parts[i < depth ? i : uniform(rng, 0, depth - 1)].push_back(ids[i]);
    }
    return OrderedPartition(std::move(parts));
}

/// Positive normalized lengths: each layer sums to one.
inline std::map<EdgeId, Rational> random_target(Rng& rng, const OrderedPartition& p, long max_part = 20)
{
    std::map<EdgeId, Rational> x;
    for (const auto& part : p.parts()) {
        Rational sum = 0;
        for (const auto& e : part) {
            x[e] = random_rational(rng, max_part, max_part, true);
            sum += x[e];
        }
        for (const auto& e : part) {
            x[e] /= sum;
            x[e].canonicalize();
        }
    }
    return x;
}

/// Piecewise-linear function in normalized arc length: vertex values and up
/// to three breakpoints per edge at positions in [0, 1].
inline PiecewiseLinearFunction random_test_function(Rng& rng, const AugmentedGraph& g)
{
    PiecewiseLinearFunction f;
    for (const auto& v : g.vertices()) f.vertex_values[v] = random_rational(rng, 20, 5, false);
    for (const auto& e : g.edges()) {
        const std::size_t k = uniform(rng, 0, 3);
        for (std::size_t i = 0; i < k; ++i) {
            const long q = static_cast<long>(uniform(rng, 1, 10));
            const long pnum = static_cast<long>(uniform(rng, 0, static_cast<std::size_t>(q)));
            Rational s(pnum, q);
            s.canonicalize();
            f.breakpoints[e.id].push_back({s, random_rational(rng, 20, 5, false)});
        }
    }
    return f;
}

struct ProfileOptions {
    std::size_t min_blocks = 2;
    std::size_t max_blocks = 4;
    std::size_t max_block_size = 3;
    long min_gap = 2;            ///< smallest exponent gap a_k - a_{k+1}
    long max_gap = 3;
    double diagonal_spread = 0.1; ///< A_kk = I + spread * U[-1, 1]
    double offdiagonal_range = 0.5;
};

/// Block profile with scales y_k = t^{-a_k}, a_1 > ... > a_r >= 0.
inline BlockScaleProfile random_block_profile(Rng& rng, const ProfileOptions& opt = {})
{
    const std::size_t r = uniform(rng, opt.min_blocks, opt.max_blocks);
    std::vector<std::size_t> sizes;
    std::size_t n = 0;
    for (std::size_t k = 0; k < r; ++k) {
        sizes.push_back(uniform(rng, 1, opt.max_block_size));
        n += sizes.back();
    }
    std::vector<long> a(r);
    a[r - 1] = static_cast<long>(uniform(rng, 0, 1));
    for (std::size_t k = r - 1; k-- > 0;) {
        a[k] = a[k + 1] + std::uniform_int_distribution<long>(opt.min_gap, opt.max_gap)(rng);
    }
    std::vector<Laurent> scales;
    for (long ak : a) scales.push_back(Laurent::monomial(1, -ak));

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    DenseMatrix limit(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const auto offsets = detail::block_offsets(sizes);
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < r; ++l)
            for (Eigen::Index i = offsets[k]; i < offsets[k + 1]; ++i)
                for (Eigen::Index j = offsets[l]; j < offsets[l + 1]; ++j) {
                    if (k == l) {
                        limit(i, j) = (i == j ? 1.0 : 0.0) + opt.diagonal_spread * unit(rng);
                    } else {
                        limit(i, j) = opt.offdiagonal_range * unit(rng);
                    }
                }
    return BlockScaleProfile(std::move(sizes), std::move(scales), std::move(limit));
}

} // namespace canon::corpus

#endif // CANON_CORPUS_HPP
