#include <canon/bundled.hpp>
#include <canon/corpus.hpp>
#include <canon/layering.hpp>

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>

using namespace canon;

namespace {

using Parts = std::vector<std::vector<EdgeId>>;

OrderedPartition op(Parts parts)
{
    return OrderedPartition(std::move(parts));
}

std::vector<std::vector<EdgeId>> edge_sets(const std::vector<SpanningTree>& trees)
{
    std::vector<std::vector<EdgeId>> out;
    for (const auto& t : trees) out.push_back(t.edges);
    return out;
}

/// All ordered partitions of the subsets of {a, b, c}.
std::vector<OrderedPartition> all_partitions_of_subsets()
{
    const std::vector<EdgeId> ground{"a", "b", "c"};
    std::vector<OrderedPartition> out;
    // Assign each element a layer label in 0..3 (0 = absent), keep surjective labelings.
    for (int code = 0; code < 64; ++code) {
        int labels[3] = {code % 4, code / 4 % 4, code / 16 % 4};
        const int depth = *std::max_element(labels, labels + 3);
        Parts parts(static_cast<std::size_t>(depth));
        for (int i = 0; i < 3; ++i)
            if (labels[i] > 0) parts[static_cast<std::size_t>(labels[i] - 1)].push_back(ground[static_cast<std::size_t>(i)]);
        if (std::any_of(parts.begin(), parts.end(), [](const auto& p) { return p.empty(); })) continue;
        out.push_back(op(parts));
    }
    return out;
}

} // namespace

TEST_CASE("ordered partitions reject empty and overlapping layers", "[layering]")
{
    CHECK_THROWS_AS(op({{"e"}, {}}), PreconditionError);
    CHECK_THROWS_AS(op({{"e"}, {"e", "f"}}), PreconditionError);
}

TEST_CASE("filtrations of ordered partitions", "[layering]")
{
    CHECK(to_filtration(op({{"e"}, {"f"}})) == Parts{{"e"}, {"e", "f"}});
    CHECK(to_filtration(OrderedPartition()).empty());
    CHECK(to_filtration(op({{"e", "f"}})) == Parts{{"e", "f"}});
}

TEST_CASE("refinement order on two edges", "[layering]")
{
    CHECK(refines(op({{"e"}, {"f"}}), op({{"e"}})));
    CHECK(refines(op({{"f"}, {"e"}}), op({{"e", "f"}})));
    CHECK_FALSE(refines(op({{"f"}, {"e"}}), op({{"e"}, {"f"}})));
    CHECK(refines(op({{"e"}}), OrderedPartition()));
}

TEST_CASE("refinement is a partial order", "[layering][property]")
{
    const auto all = all_partitions_of_subsets();
    REQUIRE(all.size() == 26); // 1 + 3*1 + 3*3 + 13
    for (const auto& p : all) {
        CHECK(refines(p, p));
        CHECK(refines(p, OrderedPartition()));
        for (const auto& q : all) {
            if (refines(p, q) && refines(q, p)) CHECK(p.parts() == q.parts());
            if (refines(p, q)) {
                const auto sp = p.support();
                for (const auto& e : q.support()) CHECK(std::binary_search(sp.begin(), sp.end(), e));
            }
            for (const auto& r : all)
                if (refines(p, q) && refines(q, r)) CHECK(refines(p, r));
        }
    }
}

TEST_CASE("graded minors of the triangle", "[layering]")
{
    const auto report = graded_minors(bundled::k3(), bundled::layering());
    REQUIRE(report.layers.size() == 2);
    const AugmentedGraph& gr1 = report.layers[0].graph;
    CHECK(gr1.vertex_count() == 1);
    CHECK(gr1.edge_ids() == std::vector<EdgeId>{"e1"});
    CHECK(gr1.edge("e1").is_loop());
    const AugmentedGraph& gr2 = report.layers[1].graph;
    CHECK(gr2.vertex_count() == 3);
    CHECK(gr2.edge_ids() == std::vector<EdgeId>{"e2", "e3"});
    CHECK(graph_genus(gr2) == 0);
    CHECK(is_connected(gr2));
    CHECK(report.genus_vector == std::vector<std::size_t>{1, 0});
}

TEST_CASE("graded minors of the theta graph", "[layering]")
{
    const auto report = graded_minors(bundled::theta(), bundled::layering());
    const AugmentedGraph& gr1 = report.layers[0].graph;
    CHECK(gr1.vertex_count() == 1);
    CHECK(gr1.edge("e1").is_loop());
    const AugmentedGraph& gr2 = report.layers[1].graph;
    CHECK(gr2.vertex_count() == 2);
    CHECK(gr2.edge_ids() == std::vector<EdgeId>{"e2", "e3"});
    CHECK(report.genus_vector == std::vector<std::size_t>{1, 1});
    for (const auto& [v, image] : report.layers[0].vertex_projection) CHECK(gr1.has_vertex(image));
}

TEST_CASE("trivial layering leaves the graph alone", "[layering]")
{
    const AugmentedGraph g = bundled::theta();
    const auto report = graded_minors(g, OrderedPartition::trivial(g));
    REQUIRE(report.layers.size() == 1);
    CHECK(report.layers[0].graph == g);
    CHECK(genus_decomposition(g, OrderedPartition::trivial(g)) == std::vector<std::size_t>{2});
}

TEST_CASE("graded minors require a covering layering", "[layering]")
{
    CHECK_THROWS_AS(graded_minors(bundled::theta(), op({{"e1"}, {"e2"}})), PreconditionError);
    CHECK_THROWS_AS(graded_minors(bundled::theta(), op({{"e1"}, {"e2", "e3", "e4"}})), PreconditionError);
}

TEST_CASE("genus decomposition sums to the graph genus", "[layering][property]")
{
    corpus::Rng rng(1234);
    for (int rep = 0; rep < 600; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const OrderedPartition p = corpus::random_layering(rng, g);
        const auto h = genus_decomposition(g, p);
        std::size_t sum = 0;
        for (auto x : h) sum += x;
        CHECK(sum == graph_genus(g));
        const auto report = graded_minors(g, p);
        for (std::size_t j = 0; j < p.depth(); ++j) {
            CHECK(report.layers[j].graph.edge_ids() == p.part(j));
            CHECK(graph_genus(report.layers[j].graph) == h[j]);
        }
    }
}

TEST_CASE("layered spanning trees of the bundled graphs", "[layering]")
{
    CHECK(edge_sets(layered_spanning_trees(bundled::theta(), bundled::layering()))
          == Parts{{"e2"}, {"e3"}});
    // Formal definition: gr^1 is a loop (empty tree), gr^2 is the path e2, e3.
    CHECK(edge_sets(layered_spanning_trees(bundled::k3(), bundled::layering())) == Parts{{"e2", "e3"}});
    const AugmentedGraph g = bundled::theta();
    CHECK(layered_spanning_trees(g, OrderedPartition::trivial(g)) == spanning_trees(g));
}

TEST_CASE("layered spanning trees: product count and layer deficits", "[layering][property]")
{
    corpus::Rng rng(4321);
    for (int rep = 0; rep < 300; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng, {7, 10, true});
        const OrderedPartition p = corpus::random_layering(rng, g);
        const auto report = graded_minors(g, p);
        const auto layered = layered_spanning_trees(g, p);
        const auto all = spanning_trees(g);

        std::size_t product = 1;
        for (const auto& minor : report.layers)
            product *= oracle::brute_force_spanning_trees(minor.graph).size();
        CHECK(layered.size() == product);
        for (const auto& t : layered) {
            CHECK(std::binary_search(all.begin(), all.end(), t));
            for (std::size_t j = 0; j < p.depth(); ++j) {
                const auto& part = p.part(j);
                const auto outside = std::count_if(part.begin(), part.end(),
                                                   [&](const EdgeId& e) { return !t.contains(e); });
                CHECK(static_cast<std::size_t>(outside) == report.genus_vector[j]);
            }
        }
    }
}

TEST_CASE("admissible basis of the theta graph", "[layering]")
{
    const AugmentedGraph g = bundled::theta();
    const auto basis = admissible_cycle_basis(g, bundled::layering());
    REQUIRE(basis.block_sizes == std::vector<std::size_t>{1, 1});
    REQUIRE(basis.cycles.size() == 2);
    CHECK(basis.cycles[0]["e1"] != 0);
    CHECK(basis.cycles[1]["e1"] == 0);
    CHECK(basis.cycles[1]["e2"] != 0);
    CHECK(basis.cycles[1]["e3"] != 0);
    CHECK(check_admissible(g, bundled::layering(), basis).ok);
}

TEST_CASE("admissible basis of a tree and of the trivial layering", "[layering]")
{
    const AugmentedGraph path({"a", "b", "c"}, {{"x", "a", "b"}, {"y", "b", "c"}}, {}, {});
    const auto tree_basis = admissible_cycle_basis(path, OrderedPartition::trivial(path));
    CHECK(tree_basis.cycles.empty());
    CHECK(check_admissible(path, OrderedPartition::trivial(path), tree_basis).ok);

    const AugmentedGraph g = bundled::theta();
    const AdmissibleBasis any{cycle_basis(g), {2}};
    CHECK(check_admissible(g, OrderedPartition::trivial(g), any).ok);
}

TEST_CASE("admissibility checker rejects bad bases", "[layering]")
{
    const AugmentedGraph g = bundled::theta();
    const auto p = bundled::layering();
    auto good = admissible_cycle_basis(g, p);

    AdmissibleBasis swapped = good;
    std::swap(swapped.cycles[0], swapped.cycles[1]);
    CHECK_FALSE(check_admissible(g, p, swapped).ok); // block 2 cycle touches e1

    AdmissibleBasis doubled = good;
    for (auto& [e, c] : doubled.cycles[1].coeffs) c *= 2;
    CHECK_FALSE(check_admissible(g, p, doubled).ok); // not a Z-basis
}

TEST_CASE("admissible bases exist for random layered graphs", "[layering][property]")
{
    corpus::Rng rng(999);
    for (int rep = 0; rep < 300; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const OrderedPartition p = corpus::random_layering(rng, g);
        const auto basis = admissible_cycle_basis(g, p);
        const auto check = check_admissible(g, p, basis);
        INFO(check.reason);
        CHECK(check.ok);
        // Condition (i) verbatim: block j only uses edges of layers j, j+1, ...
        for (std::size_t j = 0; j < p.depth(); ++j) {
            const auto [first, last] = basis.block_range(j);
            const auto allowed = p.tail_from(j);
            for (std::size_t i = first; i < last; ++i)
                for (const auto& [e, c] : basis.cycles[i].coeffs) CHECK(allowed.count(e) == 1);
        }
    }
}
