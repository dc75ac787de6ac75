#include <canon/bundled.hpp>
#include <canon/corpus.hpp>
#include <canon/io.hpp>
#include <canon/report.hpp>

#include <catch_amalgamated.hpp>

#include <string>

using namespace canon;

namespace {

std::string data(const std::string& name)
{
    return std::string(CANON_DATA_DIR) + "/" + name;
}

std::string error_text(const std::string& name)
{
    try {
        load_document(data(name));
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& haystack, const std::string& needle)
{
    return haystack.find(needle) != std::string::npos;
}

} // namespace

TEST_CASE("bundled documents load", "[io]")
{
    const GraphDocument theta = load_document(data("theta.json"));
    CHECK(theta.vertices.size() == 2);
    CHECK(theta.edges.size() == 3);
    CHECK_FALSE(theta.layering.has_value());
    CHECK(to_graph(theta) == bundled::theta());

    const GraphDocument fam = load_document(data("theta_family.json"));
    const LengthFamily f = to_family(fam);
    CHECK(f.param_lengths == bundled::theta_family().param_lengths);
    CHECK(f.target_point == bundled::target());
}

TEST_CASE("documents round-trip through serialization", "[io][property]")
{
    for (const char* name : {"theta.json", "tree.json", "k3.json", "k3_family.json", "theta_family.json",
                             "nonconvergent_family.json", "pad_only.json", "stationary_family.json"}) {
        const GraphDocument doc = load_document(data(name));
        const std::string text = serialize_document(doc);
        CHECK(parse_document(text) == doc);
        CHECK(serialize_document(parse_document(text)) == text);
    }
    corpus::Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const auto lengths = corpus::random_lengths(rng, g);
        GraphDocument doc = document_from_graph(g, &lengths);
        const OrderedPartition p = corpus::random_layering(rng, g);
        doc.layering = p.parts();
        doc.target = corpus::random_target(rng, p);
        const GraphDocument back = parse_document(serialize_document(doc));
        CHECK(back == doc);
        CHECK(to_graph(back) == g);
        CHECK(to_metric(back).lengths == lengths);
    }
}

TEST_CASE("malformed rationals name the edge", "[io]")
{
    const std::string message = error_text("bad_rational.json");
    CHECK(contains(message, "edge 'e2'"));
    CHECK(contains(message, "1/0"));
}

TEST_CASE("malformed documents are parse errors", "[io]")
{
    CHECK_THROWS_AS(parse_document("{"), ParseError);
    CHECK_THROWS_AS(parse_document("[]"), ParseError);
    CHECK_THROWS_AS(parse_document(R"({"vertices": []})"), ParseError);
    CHECK_THROWS_AS(parse_document(R"({"vertices": [{"id": "a"}], "edges": [{"id": "e", "ends": ["a"]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_document(R"({"vertices": [{"id": "a", "genus": "x"}], "edges": []})"), ParseError);
    CHECK_THROWS_AS(
        parse_document(R"({"vertices": [{"id": "a"}], "edges": [], "family": {"e": "-t"}})"), ParseError);
    CHECK_THROWS_AS(load_document(data("does_not_exist.json")), ParseError);
    try {
        parse_document("{\n  \"vertices\": [,]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(contains(e.what(), "line 2"));
    }
}

TEST_CASE("structural problems are precondition errors", "[io]")
{
    CHECK_THROWS_AS(to_graph(parse_document(R"({"vertices": [{"id": "a"}], "edges": [{"id": "e", "ends": ["a", "b"]}]})")),
                    PreconditionError);
    CHECK_THROWS_AS(to_metric(load_document(data("nonconvergent_family.json"))), PreconditionError);
    CHECK_THROWS_AS(to_family(load_document(data("theta.json"))), PreconditionError);
}

TEST_CASE("Im(Lambda_0) files accept numbers and rationals", "[io]")
{
    const DenseMatrix m = parse_lambda0(read_file(data("pad_only_lambda0.json")));
    CHECK(m(0, 1) == 0.5);
    CHECK(m(1, 1) == 3.0);
    CHECK_THROWS_AS(parse_lambda0(R"({"matrix": [[1, 2], [3]]})"), ParseError);
    CHECK_THROWS_AS(parse_lambda0(R"({"rows": []})"), ParseError);
}

TEST_CASE("measure report on the theta graph", "[io][report]")
{
    const Report r = cmd_measure(load_document(data("theta.json")), "all");
    CHECK(r.exit_code == exit_ok);
    CHECK(r.json["agree"] == true);
    for (const char* name : {"trees", "projection", "matrix"})
        for (const char* e : {"e1", "e2", "e3"}) CHECK(r.json["results"][name]["edges"][e]["exact"] == "2/3");
    CHECK(contains(r.table, "agree: true"));
}

TEST_CASE("measure report on a tree", "[io][report]")
{
    const Report r = cmd_measure(load_document(data("tree.json")), "all");
    CHECK(r.exit_code == exit_ok);
    for (const auto& [name, result] : r.json["results"].items())
        for (const auto& [e, c] : result["edges"].items()) CHECK(c["exact"] == "0");
    CHECK_THROWS_AS(cmd_measure(load_document(data("tree.json")), "bogus"), PreconditionError);
}

TEST_CASE("minors report", "[io][report]")
{
    const Report k3 = cmd_minors(load_document(data("k3.json")));
    CHECK(k3.exit_code == exit_ok);
    CHECK(k3.json["genus_vector"][0]["exact"] == "1");
    CHECK(k3.json["genus_vector"][1]["exact"] == "0");

    const Report trivial = cmd_minors(load_document(data("theta.json")));
    REQUIRE(trivial.json["genus_vector"].size() == 1);
    CHECK(trivial.json["genus_vector"][0]["exact"] == "2");

    CHECK_THROWS_AS(cmd_minors(load_document(data("uncovered_layering.json"))), PreconditionError);
}

TEST_CASE("trees report", "[io][report]")
{
    const Report r = cmd_trees(load_document(data("theta.json")));
    CHECK(r.json["count"]["exact"] == "3");
    CHECK(r.json["total_weight"]["exact"] == "3");
}

TEST_CASE("limit report on the theta family", "[io][report]")
{
    const Report r = cmd_limit(load_document(data("theta_family.json")), parse_grid("6"));
    CHECK(r.exit_code == exit_ok);
    CHECK(r.json["convergent"] == true);
    CHECK(r.json["omega_dichotomy"] == true);
    CHECK(r.json["deviation_nonincreasing"] == true);
    const Rational last = parse_rational(r.json["trajectory"]["e2"].back()["exact"].get<std::string>());
    CHECK(abs(last - Rational(1, 2)) <= Rational(1, 100000));
}

TEST_CASE("limit report on a stationary family", "[io][report]")
{
    const Report r = cmd_limit(load_document(data("stationary_family.json")), parse_grid("4"));
    CHECK(r.exit_code == exit_ok);
    for (const auto& d : r.json["max_deviation"]) CHECK(d["exact"] == "0");
}

TEST_CASE("limit report refuses non-convergent families", "[io][report]")
{
    const Report r = cmd_limit(load_document(data("nonconvergent_family.json")), parse_grid("6"));
    CHECK(r.exit_code == exit_precondition);
    CHECK(r.json["convergent"] == false);
    CHECK(r.json["violations"][0]["condition"] == "conv3");
}

TEST_CASE("limit report tolerance is an assertion", "[io][report]")
{
    const GraphDocument doc = load_document(data("theta_family.json"));
    CHECK(cmd_limit(doc, parse_grid("6"), Rational(1, 100000)).exit_code == exit_ok);
    const Report tight = cmd_limit(doc, parse_grid("2"), Rational(1, 1000000000));
    CHECK(tight.exit_code == exit_assertion);
    CHECK(tight.json["within_tolerance"] == false);
}

TEST_CASE("grid parsing", "[io]")
{
    CHECK(parse_grid("3") == geometric_grid(3));
    CHECK(parse_grid("1/10,1/100") == std::vector<Rational>{Rational(1, 10), Rational(1, 100)});
    CHECK(parse_grid("0.5,1e-3") == std::vector<Rational>{Rational(1, 2), Rational(1, 1000)});
    CHECK_THROWS_AS(parse_grid("0"), ParseError);
    CHECK_THROWS_AS(parse_grid("1/10,,1/100"), ParseError);
}

TEST_CASE("periods report on the theta graph", "[io][report]")
{
    const GraphDocument doc = load_document(data("theta_family.json"));
    const Report r = cmd_periods(doc, std::nullopt, {1e-2, 1e-4, 1e-6}, 1);
    CHECK(r.exit_code == exit_ok);
    const auto& targets = r.json["graded_inverse"]["targets"];
    CHECK(targets[0][0][0]["float"] == "1");
    CHECK(targets[1][0][0]["float"] == "1");
    const auto& last = r.json["graded_inverse"]["points"].back();
    CHECK(last["flagged"] == false);
    for (const auto& d : last["block_deviation"]) CHECK(std::stod(d["float"].get<std::string>()) <= 1e-6);
    CHECK(r.json["inverse_lemma"]["schur_agreement"] == true);
}

TEST_CASE("periods report on a pad-only curve", "[io][report]")
{
    const GraphDocument doc = load_document(data("pad_only.json"));
    const DenseMatrix lambda0 = parse_lambda0(read_file(data("pad_only_lambda0.json")));
    const Report r = cmd_periods(doc, lambda0, {1e-1, 1e-3}, 1);
    CHECK(r.exit_code == exit_ok);
    for (const auto& pt : r.json["graded_inverse"]["points"]) CHECK(std::stod(pt["pad_deviation"]["float"].get<std::string>()) <= 1e-15);
}

TEST_CASE("periods report flags oversized parameters", "[io][report]")
{
    const GraphDocument doc = load_document(data("theta_family.json"));
    const Report r = cmd_periods(doc, -10.0 * DenseMatrix::Identity(2, 2), {1.0, 1e-3}, 1);
    CHECK(r.json["graded_inverse"]["points"][0]["flagged"] == true);
    CHECK(r.json["graded_inverse"]["points"][1]["flagged"] == false);
}

TEST_CASE("floats carry seventeen significant digits", "[io][report]")
{
    CHECK(floating(0.1)["float"] == "0.10000000000000001");
    CHECK(exact(Rational(-3, 6))["exact"] == "-1/2");
}
