#include <canon/bundled.hpp>
#include <canon/corpus.hpp>
#include <canon/graph.hpp>

#include "support/oracles.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace canon;

namespace {

AugmentedGraph single_loop(int genus = 0)
{
    std::map<VertexId, int> g;
    if (genus != 0) g["v"] = genus;
    return AugmentedGraph({"v"}, {{"e", "v", "v"}}, g, {});
}

std::vector<std::vector<EdgeId>> edge_sets(const std::vector<SpanningTree>& trees)
{
    std::vector<std::vector<EdgeId>> out;
    for (const auto& t : trees) out.push_back(t.edges);
    return out;
}

/// Contracts the edges one at a time in the given order.
AugmentedGraph contract_in_order(AugmentedGraph g, const std::vector<EdgeId>& order)
{
    for (const auto& e : order) g = contract(g, e);
    return g;
}

} // namespace

TEST_CASE("graph genus of a loop, the triangle and the theta graph", "[graph]")
{
    CHECK(graph_genus(single_loop()) == 1);
    CHECK(graph_genus(bundled::k3()) == 1);
    CHECK(graph_genus(bundled::theta()) == 2);
}

TEST_CASE("total genus adds vertex genera", "[graph]")
{
    CHECK(total_genus(bundled::k3()) == 1);
    const AugmentedGraph k3_heavy({"v1", "v2", "v3"}, bundled::k3().edges(), {{"v2", 2}}, {});
    CHECK(total_genus(k3_heavy) == 3);
    const AugmentedGraph theta11({"v1", "v2"}, bundled::theta().edges(), {{"v1", 1}, {"v2", 1}}, {});
    CHECK(total_genus(theta11) == 4);
}

TEST_CASE("stability conditions", "[graph]")
{
    CHECK(is_stable(bundled::theta()));
    CHECK_FALSE(is_stable(AugmentedGraph({"v"}, {}, {{"v", 1}}, {})));
    CHECK(is_stable(AugmentedGraph({"v"}, {}, {{"v", 2}}, {})));
    // A loop counts twice in the degree: genus-0 vertex with one loop has deg 2.
    CHECK_FALSE(is_stable(single_loop()));
    CHECK(is_stable(AugmentedGraph({"v"}, {{"e", "v", "v"}}, {}, {{1, "v"}})));
    CHECK(is_stable(single_loop(1)));
}

TEST_CASE("edge deletion", "[graph]")
{
    const AugmentedGraph theta = bundled::theta();
    const AugmentedGraph two_cycle = delete_edges(theta, {"e1"});
    CHECK(two_cycle.edge_ids() == std::vector<EdgeId>{"e2", "e3"});
    CHECK(two_cycle.vertex_count() == 2);
    CHECK(graph_genus(two_cycle) == 1);

    CHECK(delete_edges(theta, {}) == theta);

    const AugmentedGraph k3_minus = delete_edges(bundled::k3(), {"e2", "e3"});
    CHECK(k3_minus.edge_ids() == std::vector<EdgeId>{"e1"});
    CHECK(k3_minus.vertex_count() == 3);
    CHECK(component_count(k3_minus) == 2);

    CHECK_THROWS_AS(delete_edges(theta, {"nope"}), PreconditionError);
}

TEST_CASE("contraction genus rules", "[graph]")
{
    const AugmentedGraph g({"u", "w"}, {{"e", "u", "w"}}, {{"u", 1}, {"w", 2}}, {});
    const AugmentedGraph merged = contract(g, "e");
    REQUIRE(merged.vertex_count() == 1);
    CHECK(merged.genus_of(merged.vertices().front()) == 3);
    CHECK(merged.edge_count() == 0);

    const AugmentedGraph loop_gone = contract(single_loop(), "e");
    REQUIRE(loop_gone.vertex_count() == 1);
    CHECK(loop_gone.genus_of("v") == 1);
    CHECK(loop_gone.edge_count() == 0);

    CHECK_THROWS_AS(contract(g, "nope"), PreconditionError);
}

TEST_CASE("contraction re-targets marks", "[graph]")
{
    const AugmentedGraph g({"a", "b"}, {{"e", "a", "b"}}, {}, {{1, "b"}, {2, "a"}});
    const AugmentedGraph c = contract(g, "e");
    REQUIRE(c.vertex_count() == 1);
    CHECK(c.marks().at(1) == "a");
    CHECK(c.marks().at(2) == "a");
}

TEST_CASE("contracting a set of edges", "[graph]")
{
    const AugmentedGraph theta = bundled::theta();
    const AugmentedGraph c = contract_set(theta, {"e2", "e3"});
    CHECK(c.vertex_count() == 1);
    CHECK(c.edge_ids() == std::vector<EdgeId>{"e1"});
    CHECK(c.edge("e1").is_loop());
    CHECK(total_genus(c) == total_genus(theta));
    CHECK(contract_set(theta, {}) == theta);
}

TEST_CASE("contraction preserves total genus on random graphs", "[graph][property]")
{
    corpus::Rng rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        for (const auto& e : g.edge_ids()) CHECK(total_genus(contract(g, e)) == total_genus(g));
    }
}

TEST_CASE("contraction order does not matter", "[graph][property]")
{
    corpus::Rng rng(202);
    for (int rep = 0; rep < 100; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        std::vector<EdgeId> ids = g.edge_ids();
        std::shuffle(ids.begin(), ids.end(), rng);
        ids.resize(corpus::uniform(rng, 0, ids.size()));
        std::vector<EdgeId> other = ids;
        std::shuffle(other.begin(), other.end(), rng);
        const AugmentedGraph a = contract_in_order(g, ids);
        const AugmentedGraph b = contract_in_order(g, other);
        CHECK(a == b);
        CHECK(a == contract_set(g, std::set<EdgeId>(ids.begin(), ids.end())));
    }
}

TEST_CASE("deletion and contraction commute on disjoint sets", "[graph][property]")
{
    corpus::Rng rng(303);
    for (int rep = 0; rep < 100; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        std::set<EdgeId> f1, f2;
        for (const auto& e : g.edge_ids()) {
            const auto pick = corpus::uniform(rng, 0, 2);
            if (pick == 1) f1.insert(e);
            if (pick == 2) f2.insert(e);
        }
        CHECK(contract_set(delete_edges(g, f1), f2) == delete_edges(contract_set(g, f2), f1));
    }
}

TEST_CASE("spanning trees of small graphs", "[graph]")
{
    CHECK(edge_sets(spanning_trees(bundled::theta()))
          == std::vector<std::vector<EdgeId>>{{"e1"}, {"e2"}, {"e3"}});
    const auto loop_trees = spanning_trees(single_loop());
    REQUIRE(loop_trees.size() == 1);
    CHECK(loop_trees.front().edges.empty());
    CHECK(edge_sets(spanning_trees(bundled::k3()))
          == std::vector<std::vector<EdgeId>>{{"e1", "e2"}, {"e1", "e3"}, {"e2", "e3"}});
}

TEST_CASE("spanning trees agree with brute force and Kirchhoff", "[graph][property]")
{
    corpus::Rng rng(404);
    for (int rep = 0; rep < 150; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng, {7, 11, true});
        const auto trees = spanning_trees(g);
        CHECK(edge_sets(trees) == oracle::brute_force_spanning_trees(g));
        CHECK(Rational(static_cast<long>(trees.size())) == oracle::kirchhoff_tree_count(g));
        CHECK(std::is_sorted(trees.begin(), trees.end()));
    }
}

TEST_CASE("bridges lie in every tree and loops in none", "[graph][property]")
{
    corpus::Rng rng(505);
    for (int rep = 0; rep < 100; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const auto trees = spanning_trees(g);
        for (const auto& e : g.edges()) {
            const bool bridge = component_count(delete_edges(g, {e.id})) > component_count(g);
            const auto count = std::count_if(trees.begin(), trees.end(),
                                             [&](const SpanningTree& t) { return t.contains(e.id); });
            if (e.is_loop()) CHECK(count == 0);
            if (bridge) CHECK(static_cast<std::size_t>(count) == trees.size());
        }
    }
}

TEST_CASE("cycle bases of small graphs", "[graph]")
{
    const auto theta_basis = cycle_basis(bundled::theta());
    REQUIRE(theta_basis.size() == 2);
    for (const auto& c : theta_basis) CHECK(is_cycle(bundled::theta(), c));

    const AugmentedGraph path({"a", "b", "c"}, {{"x", "a", "b"}, {"y", "b", "c"}}, {}, {});
    CHECK(cycle_basis(path).empty());

    const auto loop_basis = cycle_basis(single_loop());
    REQUIRE(loop_basis.size() == 1);
    CHECK((loop_basis[0]["e"] == 1 || loop_basis[0]["e"] == -1));
    CHECK(loop_basis[0].coeffs.size() == 1);

    const AugmentedGraph split({"a", "b"}, {}, {}, {});
    CHECK_THROWS_AS(cycle_basis(split), DisconnectedGraphError);
}

TEST_CASE("cycle bases are independent cycles of the right rank", "[graph][property]")
{
    corpus::Rng rng(606);
    for (int rep = 0; rep < 150; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const auto basis = cycle_basis(g);
        CHECK(basis.size() == graph_genus(g));
        RationalMatrix coords(basis.size(), g.edge_count());
        const auto ids = g.edge_ids();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            CHECK(is_cycle(g, basis[i]));
            for (const auto& [v, b] : boundary(g, basis[i])) CHECK(b == 0);
            for (std::size_t j = 0; j < ids.size(); ++j) coords(i, j) = Rational(static_cast<long>(basis[i][ids[j]]));
        }
        CHECK(rank(coords) == basis.size());
    }
}
