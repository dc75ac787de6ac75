#ifndef CANON_REPORT_HPP
#define CANON_REPORT_HPP

#include <canon/bundled.hpp>
#include <canon/corpus.hpp>
#include <canon/degeneration.hpp>
#include <canon/io.hpp>
#include <canon/layering.hpp>
#include <canon/measures.hpp>
#include <canon/period_model.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace canon {

/// Process exit codes shared by the command-line front end.
enum ExitCode : int { exit_ok = 0, exit_parse = 2, exit_precondition = 3, exit_assertion = 4 };

/// Result of one command: the JSON document, a human-readable table, and
/// the exit code implied by the assertions the command checks.
struct Report {
    Json json;
    std::string table;
    int exit_code = exit_ok;
};

inline Json exact(Rational q)
{
    q.canonicalize();
    return Json{{"exact", to_string(q)}};
}

inline Json exact(std::size_t n)
{
    return Json{{"exact", std::to_string(n)}};
}

inline Json exact(long long n)
{
    return Json{{"exact", std::to_string(n)}};
}

inline Json floating(double x)
{
    return Json{{"float", format_float(x)}};
}

inline Json float_matrix(const DenseMatrix& m)
{
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(floating(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json exact_matrix(const IntegerMatrix& m)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(exact(Rational(m(i, j))));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Left-aligned plain-text table.
class TextTable {
public:
    explicit TextTable(std::vector<std::string> header) : rows_{std::move(header)} {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    std::string render() const
    {
        std::vector<std::size_t> width;
        for (const auto& row : rows_)
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (width.size() <= c) width.push_back(0);
                width[c] = std::max(width[c], row[c].size());
            }
        std::ostringstream out;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            for (std::size_t c = 0; c < rows_[r].size(); ++c) {
                out << rows_[r][c];
                if (c + 1 < rows_[r].size()) out << std::string(width[c] - rows_[r][c].size() + 2, ' ');
            }
            out << '\n';
            if (r == 0) {
                std::size_t total = 0;
                for (auto w : width) total += w + 2;
                out << std::string(total > 2 ? total - 2 : 0, '-') << '\n';
            }
        }
        return out.str();
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

inline std::string decimal(const Rational& q)
{
    return format_float(to_double(q));
}

inline std::string join(const std::vector<std::string>& items, const std::string& sep)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
    return out;
}

inline Json measure_json(const EdgeMeasure& mu)
{
    Json j;
    Json edges = Json::object();
    for (const auto& [e, c] : mu.edge_coeffs) edges[e] = exact(c);
    Json atoms = Json::object();
    for (const auto& [v, a] : mu.vertex_atoms) atoms[v] = exact(static_cast<long long>(a));
    j["edges"] = std::move(edges);
    j["vertex_atoms"] = std::move(atoms);
    j["edge_mass"] = exact(mu.edge_mass());
    j["total_mass"] = exact(mu.total_mass());
    return j;
}

/// Foster coefficients with one or all three formulations.
inline Report cmd_measure(const GraphDocument& doc, const std::string& formulation)
{
    static const std::vector<std::string> names{"trees", "projection", "matrix"};
    std::vector<std::string> selected;
    if (formulation == "all") {
        selected = names;
    } else if (std::find(names.begin(), names.end(), formulation) != names.end()) {
        selected = {formulation};
    } else {
        throw PreconditionError("unknown formulation '" + formulation + "'");
    }

    const MetricGraph m = to_metric(doc);
    const std::size_t h = graph_genus(m.graph);
    std::vector<EdgeMeasure> results;
    for (const auto& name : selected) {
        if (name == "trees") results.push_back(foster_by_trees(m));
        if (name == "projection") results.push_back(foster_by_projection(m));
        if (name == "matrix") results.push_back(foster_by_matrix(m));
    }

    Report r;
    r.json["command"] = "measure";
    r.json["formulation"] = formulation;
    r.json["vertices"] = exact(m.graph.vertex_count());
    r.json["edges"] = exact(m.graph.edge_count());
    r.json["h"] = exact(h);
    r.json["g"] = exact(total_genus(m.graph));
    Json per = Json::object();
    for (std::size_t i = 0; i < selected.size(); ++i) per[selected[i]] = measure_json(results[i]);
    r.json["results"] = std::move(per);

    bool ok = true;
    const bool mass_ok = std::all_of(results.begin(), results.end(),
                                     [&](const EdgeMeasure& mu) { return mu.edge_mass() == Rational(h); });
    r.json["edge_mass_equals_h"] = mass_ok;
    ok = ok && mass_ok;
    if (selected.size() > 1) {
        const bool agree = std::all_of(results.begin(), results.end(),
                                       [&](const EdgeMeasure& mu) { return mu == results.front(); });
        r.json["agree"] = agree;
        ok = ok && agree;
    }
    r.exit_code = ok ? exit_ok : exit_assertion;

    std::vector<std::string> header{"edge", "length"};
    header.insert(header.end(), selected.begin(), selected.end());
    TextTable table(header);
    for (const auto& e : m.graph.edges()) {
        std::vector<std::string> row{e.id, to_string(m.length(e.id))};
        for (const auto& mu : results) row.push_back(to_string(mu.edge_coeffs.at(e.id)));
        table.add(std::move(row));
    }
    r.table = table.render() + "h = " + std::to_string(h) + ", g = " + std::to_string(total_genus(m.graph))
              + (selected.size() > 1 ? std::string(", agree: ") + (r.json["agree"].get<bool>() ? "true" : "false") : "")
              + "\n";
    return r;
}

inline Json cycle_json(const CycleVector& c)
{
    Json j = Json::object();
    for (const auto& [e, k] : c.coeffs) j[e] = exact(static_cast<long long>(k));
    return j;
}

/// Graded minors, genus vector and layered spanning trees.
inline Report cmd_minors(const GraphDocument& doc)
{
    const AugmentedGraph g = to_graph(doc);
    const OrderedPartition p = to_layering(doc, g);
    const auto minors = graded_minors(g, p);
    const std::size_t h = graph_genus(g);

    Report r;
    r.json["command"] = "minors";
    Json layers = Json::array();
    TextTable table({"layer", "edges", "minor vertices", "h^j", "trees"});
    Integer product = 1;
    std::size_t genus_sum = 0;
    for (std::size_t j = 0; j < minors.layers.size(); ++j) {
        const auto& minor = minors.layers[j];
        const std::size_t trees = spanning_trees(minor.graph).size();
        product *= static_cast<unsigned long>(trees);
        genus_sum += minor.genus;
        Json layer;
        layer["index"] = exact(j + 1);
        layer["edges"] = p.part(j);
        layer["minor_vertices"] = minor.graph.vertices();
        layer["genus"] = exact(minor.genus);
        layer["spanning_trees"] = exact(trees);
        layers.push_back(std::move(layer));
        table.add({std::to_string(j + 1), join(p.part(j), ","), join(minor.graph.vertices(), ","),
                   std::to_string(minor.genus), std::to_string(trees)});
    }
    const std::size_t layered = layered_spanning_trees(g, p).size();
    const AdmissibleBasis basis = admissible_cycle_basis(g, p);
    const AdmissibilityCheck admissible = check_admissible(g, p, basis);

    Json genus_vector = Json::array();
    for (auto k : minors.genus_vector) genus_vector.push_back(exact(k));
    r.json["layers"] = std::move(layers);
    r.json["genus_vector"] = std::move(genus_vector);
    r.json["h"] = exact(h);
    r.json["genus_sum_equals_h"] = genus_sum == h;
    r.json["layered_trees"] = exact(layered);
    r.json["product_of_tree_counts"] = exact(Rational(product));
    r.json["count_matches_product"] = Integer(static_cast<unsigned long>(layered)) == product;
    Json cycles = Json::array();
    for (const auto& c : basis.cycles) cycles.push_back(cycle_json(c));
    r.json["admissible_basis"] = std::move(cycles);
    r.json["admissible"] = admissible.ok;

    const bool ok = genus_sum == h && Integer(static_cast<unsigned long>(layered)) == product && admissible.ok;
    r.exit_code = ok ? exit_ok : exit_assertion;
    std::vector<std::string> gv;
    for (auto k : minors.genus_vector) gv.push_back(std::to_string(k));
    r.table = table.render() + "genus vector (" + join(gv, ", ") + "), h = " + std::to_string(h)
              + ", layered trees " + std::to_string(layered) + " = product " + product.get_str() + "\n";
    return r;
}

/// Spanning trees, with weights prod_{e not in T} l_e when lengths are given.
inline Report cmd_trees(const GraphDocument& doc)
{
    const AugmentedGraph g = to_graph(doc);
    const auto trees = spanning_trees(g);
    std::optional<MetricGraph> m;
    if (has_lengths(doc)) m = to_metric(doc);

    Report r;
    r.json["command"] = "trees";
    r.json["count"] = exact(trees.size());
    Json list = Json::array();
    TextTable table(m ? std::vector<std::string>{"tree", "weight"} : std::vector<std::string>{"tree"});
    Rational total = 0;
    for (const auto& t : trees) {
        Json item;
        item["edges"] = t.edges;
        std::vector<std::string> row{"{" + join(t.edges, ",") + "}"};
        if (m) {
            Rational w = 1;
            for (const auto& e : g.edges())
                if (!t.contains(e.id)) w *= m->length(e.id);
            total += w;
            item["weight"] = exact(w);
            row.push_back(to_string(w));
        }
        list.push_back(std::move(item));
        table.add(std::move(row));
    }
    r.json["trees"] = std::move(list);
    if (m) r.json["total_weight"] = exact(total);
    r.table = table.render() + std::to_string(trees.size()) + " spanning trees\n";
    return r;
}

/// Parses a grid: either a count k (meaning 10^-1, ..., 10^-k) or a
/// comma-separated list of parameter values.
inline std::vector<Rational> parse_grid(const std::string& text)
{
    if (text.find(',') == std::string::npos && detail::all_digits(text) && text.size() <= 2) {
        const int k = std::stoi(text);
        if (k < 1 || k > 30) throw ParseError("grid decade count must lie in 1..30");
        return geometric_grid(k);
    }
    std::vector<Rational> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        grid.push_back(parse_rational(std::string_view(text).substr(start, comma - start)));
        start = comma + 1;
    }
    return grid;
}

/// Convergence diagnosis, omega_infinity over all spanning trees and the
/// Foster-coefficient trajectory along the grid. With a tolerance, the
/// deviation at the last grid point is also asserted to stay within it.
inline Report cmd_limit(const GraphDocument& doc, const std::vector<Rational>& grid,
                        const std::optional<Rational>& tolerance = std::nullopt)
{
    const LengthFamily f = to_family(doc);
    Report r;
    r.json["command"] = "limit";
    Json fam = Json::object();
    for (const auto& [e, p] : f.param_lengths) fam[e] = to_string(p);
    r.json["family"] = std::move(fam);

    const ConvergenceCheck check = check_convergence(f);
    r.json["convergent"] = check.ok();
    if (!check.ok()) {
        Json violations = Json::array();
        std::string text;
        for (const auto& v : check.violations) {
            violations.push_back(Json{{"condition", v.condition}, {"message", v.message}});
            text += v.condition + ": " + v.message + "\n";
        }
        r.json["violations"] = std::move(violations);
        r.table = "family does not converge to the target\n" + text;
        r.exit_code = exit_precondition;
        return r;
    }

    const auto layered = layered_spanning_trees(f.graph, f.target_layering);
    const auto minors = graded_minors(f.graph, f.target_layering);
    Json omega = Json::array();
    bool dichotomy = true;
    TextTable omega_table({"tree", "layered", "omega_inf", "expected"});
    for (const auto& t : spanning_trees(f.graph)) {
        const bool is_layered = std::binary_search(layered.begin(), layered.end(), t);
        Rational expected = 0;
        if (is_layered) {
            expected = 1;
            for (std::size_t j = 0; j < minors.layers.size(); ++j)
                for (const auto& e : f.target_layering.part(j))
                    if (!t.contains(e)) expected *= f.target_point.at(e);
        }
        const Rational value = omega_infinity(t, f);
        dichotomy = dichotomy && value == expected;
        omega.push_back(Json{{"tree", t.edges}, {"layered", is_layered}, {"value", exact(value)},
                             {"expected", exact(expected)}});
        omega_table.add({"{" + join(t.edges, ",") + "}", is_layered ? "yes" : "no", to_string(value),
                         to_string(expected)});
    }
    r.json["omega_infinity"] = std::move(omega);
    r.json["omega_dichotomy"] = dichotomy;

    const ConvergenceReport conv = limit_foster(f, grid);
    const Rational h(static_cast<unsigned long>(graph_genus(f.graph)));
    const bool mass_ok = std::all_of(conv.edge_mass.begin(), conv.edge_mass.end(),
                                     [&](const Rational& m) { return m == h; });
    Json grid_json = Json::array();
    for (const auto& t : conv.grid) grid_json.push_back(exact(t));
    Json targets = Json::object();
    for (const auto& [e, c] : conv.targets) targets[e] = exact(c);
    Json trajectory = Json::object();
    for (const auto& [e, values] : conv.trajectory) {
        Json list = Json::array();
        for (const auto& v : values) list.push_back(exact(v));
        trajectory[e] = std::move(list);
    }
    Json deviations = Json::array();
    for (const auto& d : conv.max_deviation) deviations.push_back(exact(d));
    r.json["grid"] = std::move(grid_json);
    r.json["targets"] = std::move(targets);
    r.json["trajectory"] = std::move(trajectory);
    r.json["max_deviation"] = std::move(deviations);
    r.json["final_deviation"] = floating(to_double(conv.max_deviation.back()));
    r.json["deviation_nonincreasing"] = is_nonincreasing(conv.max_deviation);
    r.json["mass_conserved"] = mass_ok;
    bool within = true;
    if (tolerance) {
        within = conv.max_deviation.back() <= *tolerance;
        r.json["tolerance"] = exact(*tolerance);
        r.json["within_tolerance"] = within;
    }
    r.exit_code = dichotomy && mass_ok && within ? exit_ok : exit_assertion;

    std::vector<std::string> header{"t"};
    for (const auto& [e, c] : conv.targets) header.push_back("mu(" + e + ")");
    header.push_back("max deviation");
    TextTable traj(header);
    for (std::size_t i = 0; i < conv.grid.size(); ++i) {
        std::vector<std::string> row{decimal(conv.grid[i])};
        for (const auto& [e, values] : conv.trajectory) row.push_back(decimal(values[i]));
        row.push_back(decimal(conv.max_deviation[i]));
        traj.add(std::move(row));
    }
    std::vector<std::string> limit_row{"limit"};
    for (const auto& [e, c] : conv.targets) limit_row.push_back(to_string(c));
    limit_row.push_back("0");
    traj.add(std::move(limit_row));
    r.table = omega_table.render() + "\n" + traj.render();
    return r;
}

namespace detail {

/// Limit blocks A_kl of the model period family: for graph blocks
/// sum_{e in pi_max(k,l)} x_e (M_e)_kl, for blocks touching the pad the
/// entries of Im(Lambda_0).
inline BlockScaleProfile period_profile(const ModelPeriodFamily& f, const OrderedPartition& p,
                                        const std::map<EdgeId, Rational>& x, const std::vector<std::size_t>& genus_vector,
                                        const std::vector<Laurent>& scales)
{
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> layer_of_block;
    std::vector<Laurent> block_scales;
    for (std::size_t k = 0; k < genus_vector.size(); ++k)
        if (genus_vector[k] > 0) {
            sizes.push_back(genus_vector[k]);
            layer_of_block.push_back(k);
            block_scales.push_back(scales[k]);
        }
    const std::size_t pad = f.monodromy.pad;
    if (pad > 0) {
        sizes.push_back(pad);
        block_scales.push_back(Laurent::constant(1));
    }
    const auto offsets = block_offsets(sizes);
    const Eigen::Index n = offsets.back();
    const std::size_t graph_blocks = layer_of_block.size();
    DenseMatrix limit = DenseMatrix::Zero(n, n);
    for (std::size_t a = 0; a < sizes.size(); ++a)
        for (std::size_t b = 0; b < sizes.size(); ++b)
            for (Eigen::Index i = offsets[a]; i < offsets[a + 1]; ++i)
                for (Eigen::Index j = offsets[b]; j < offsets[b + 1]; ++j) {
                    if (a >= graph_blocks || b >= graph_blocks) {
                        limit(i, j) = f.im_lambda0(i, j);
                        continue;
                    }
                    const std::size_t layer = layer_of_block[std::max(a, b)];
                    double sum = 0;
                    for (const auto& e : p.part(layer)) {
                        const auto& c = f.monodromy.coefficients.at(e);
                        sum += to_double(x.at(e)) * static_cast<double>(c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)]);
                    }
                    limit(i, j) = sum;
                }
    return BlockScaleProfile(std::move(sizes), std::move(block_scales), std::move(limit));
}

} // namespace detail

/// Monodromy forms, graded inverse limits and the inverse-lemma check for
/// the model family l_e(t) = x_e * y_j(t) with y_j = t^{-(r-j+1)}.
inline Report cmd_periods(const GraphDocument& doc, const std::optional<DenseMatrix>& lambda0,
                          const std::vector<double>& grid, std::uint64_t seed)
{
    const AugmentedGraph g = to_graph(doc);
    const OrderedPartition p = to_layering(doc, g);
    if (!doc.target) throw PreconditionError("document has no 'target'");
    const std::map<EdgeId, Rational>& x = *doc.target;
    const AdmissibleBasis basis = admissible_cycle_basis(g, p);
    const std::size_t h = basis.cycles.size();
    const DenseMatrix base = lambda0 ? *lambda0 : DenseMatrix::Zero(static_cast<Eigen::Index>(h), static_cast<Eigen::Index>(h));
    if (static_cast<std::size_t>(base.rows()) < h) throw PreconditionError("Im(Lambda_0) is smaller than the graph block");
    const ModelPeriodFamily f(base, monodromy_from_basis(g, basis.cycles, static_cast<std::size_t>(base.rows()) - h),
                              layered_period_lengths(p, x));

    Report r;
    r.json["command"] = "periods";
    Json mono = Json::object();
    for (const auto& [e, c] : f.monodromy.coefficients) {
        Json coeffs = Json::array();
        for (auto v : c) coeffs.push_back(exact(static_cast<long long>(v)));
        mono[e] = Json{{"c", std::move(coeffs)}, {"matrix", exact_matrix(f.monodromy.matrices.at(e))}};
    }
    r.json["monodromy"] = std::move(mono);
    Json lengths = Json::object();
    for (const auto& [e, l] : f.lengths) lengths[e] = to_string(l);
    r.json["lengths"] = std::move(lengths);

    const GradedInverseReport graded = graded_inverse_limits(f, g, p, x, grid);
    Json targets = Json::array();
    for (const auto& t : graded.targets) targets.push_back(float_matrix(t));
    Json points = Json::array();
    TextTable table({"t", "status", "block deviations", "pad deviation", "max off-diagonal"});
    for (const auto& pt : graded.points) {
        Json item;
        item["t"] = floating(pt.t);
        item["flagged"] = pt.flagged;
        if (pt.flagged) item["reason"] = pt.reason;
        Json devs = Json::array();
        std::vector<std::string> dev_text;
        for (double d : pt.block_deviation) {
            devs.push_back(floating(d));
            dev_text.push_back(format_float(d));
        }
        item["block_deviation"] = std::move(devs);
        item["pad_deviation"] = floating(pt.pad_deviation);
        item["max_offdiagonal"] = floating(pt.max_offdiagonal);
        points.push_back(std::move(item));
        table.add({format_float(pt.t), pt.flagged ? "flagged: " + pt.reason : "ok", join(dev_text, " "),
                   format_float(pt.pad_deviation), format_float(pt.max_offdiagonal)});
    }
    r.json["graded_inverse"] = Json{{"targets", std::move(targets)},
                                    {"pad_target", float_matrix(graded.pad_target)},
                                    {"points", std::move(points)}};

    bool ok = true;
    std::string lemma_text;
    const auto minors = graded_minors(g, p);
    if (h + f.monodromy.pad > 0) {
        const BlockScaleProfile profile = detail::period_profile(f, p, x, minors.genus_vector,
                                                                 detail::layer_scales(f, p, x));
        NoiseSpec noise;
        noise.seed = seed;
        const InverseLemmaReport lemma = verify_inverse_lemma(profile, noise, grid);
        Json lemma_points = Json::array();
        double worst_schur = 0;
        for (const auto& pt : lemma.points) {
            Json item;
            item["t"] = floating(pt.t);
            item["flagged"] = pt.flagged;
            item["max_diagonal_deviation"] = floating(pt.max_diagonal_deviation);
            item["max_offdiagonal"] = floating(pt.max_offdiagonal);
            item["schur_discrepancy"] = floating(pt.schur_discrepancy);
            lemma_points.push_back(std::move(item));
            if (!pt.flagged) worst_schur = std::max(worst_schur, pt.schur_discrepancy);
        }
        const bool schur_ok = worst_schur <= 1e-9;
        ok = ok && schur_ok;
        r.json["inverse_lemma"] = Json{{"noise_seed", exact(static_cast<long long>(seed))},
                                       {"points", std::move(lemma_points)},
                                       {"schur_agreement", schur_ok}};
        lemma_text = "inverse lemma: Schur recursion agreement " + std::string(schur_ok ? "true" : "false")
                     + " (max discrepancy " + format_float(worst_schur) + ")\n";
    }
    r.exit_code = ok ? exit_ok : exit_assertion;
    r.table = table.render() + lemma_text;
    return r;
}

/// Deterministic property checks over a seeded corpus.
inline Report cmd_selftest(std::uint64_t seed)
{
    corpus::Rng rng(seed);
    Report r;
    r.json["command"] = "selftest";
    r.json["seed"] = exact(static_cast<long long>(seed));
    Json checks = Json::array();
    TextTable table({"check", "cases", "result"});
    bool all = true;
    auto record = [&](const std::string& name, std::size_t cases, bool passed, Json extra = Json::object()) {
        Json item;
        item["name"] = name;
        item["cases"] = exact(cases);
        item["passed"] = passed;
        for (auto& [k, v] : extra.items()) item[k] = v;
        checks.push_back(std::move(item));
        table.add({name, std::to_string(cases), passed ? "pass" : "FAIL"});
        all = all && passed;
    };

    // Measures on random metric graphs.
    std::size_t agree = 0, mass = 0, scale = 0;
    const std::size_t graphs = 40;
    std::vector<AugmentedGraph> small;
    for (std::size_t i = 0; i < graphs; ++i) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const MetricGraph m(g, corpus::random_lengths(rng, g));
        const EdgeMeasure a = foster_by_trees(m);
        if (a == foster_by_projection(m) && a == foster_by_matrix(m)) ++agree;
        if (a.edge_mass() == Rational(static_cast<unsigned long>(graph_genus(g)))
            && a.total_mass() == Rational(static_cast<unsigned long>(total_genus(g))))
            ++mass;
        std::map<EdgeId, Rational> scaled = m.lengths;
        const Rational lambda = corpus::random_rational(rng, 100, 100, true);
        for (auto& [e, l] : scaled) l *= lambda;
        if (foster_by_trees(MetricGraph(g, scaled)) == a) ++scale;
        if (g.edge_count() <= 8) small.push_back(g);
    }
    record("formulations agree", graphs, agree == graphs);
    record("edge mass equals h", graphs, mass == graphs);
    record("scale invariance", graphs, scale == graphs);

    // Layerings.
    std::size_t genus_ok = 0, count_ok = 0, admissible_ok = 0;
    const std::size_t pairs = 60;
    for (std::size_t i = 0; i < pairs; ++i) {
        const AugmentedGraph g = corpus::random_connected_multigraph(rng);
        const OrderedPartition p = corpus::random_layering(rng, g);
        const auto minors = graded_minors(g, p);
        std::size_t sum = 0;
        std::size_t product = 1;
        for (const auto& l : minors.layers) {
            sum += l.genus;
            product *= spanning_trees(l.graph).size();
        }
        if (sum == graph_genus(g)) ++genus_ok;
        if (layered_spanning_trees(g, p).size() == product) ++count_ok;
        if (check_admissible(g, p, admissible_cycle_basis(g, p)).ok) ++admissible_ok;
    }
    record("genus decomposition", pairs, genus_ok == pairs);
    record("layered tree count", pairs, count_ok == pairs);
    record("admissible basis", pairs, admissible_ok == pairs);

    // omega_infinity dichotomy.
    std::size_t omega_ok = 0;
    for (const auto& g : small) {
        const OrderedPartition p = corpus::random_layering(rng, g);
        const auto x = corpus::random_target(rng, p);
        const LengthFamily f = layered_monomial_family(g, p, x);
        const auto layered = layered_spanning_trees(g, p);
        bool ok = true;
        for (const auto& t : spanning_trees(g)) {
            Rational expected = 0;
            if (std::binary_search(layered.begin(), layered.end(), t)) {
                expected = 1;
                for (const auto& e : g.edges())
                    if (!t.contains(e.id)) expected *= x.at(e.id);
            }
            ok = ok && omega_infinity(t, f) == expected;
        }
        if (ok) ++omega_ok;
    }
    record("omega_infinity dichotomy", small.size(), omega_ok == small.size());

    // Bundled degenerations.
    const auto grid = geometric_grid(6);
    for (const auto& [name, fam] : {std::pair{std::string("theta"), bundled::theta_family()},
                                    std::pair{std::string("k3"), bundled::k3_family()}}) {
        const ConvergenceReport conv = limit_foster(fam, grid);
        const bool passed = is_nonincreasing(conv.max_deviation) && conv.max_deviation.back() <= Rational(1, 100000);
        record("foster limit " + name, grid.size(), passed,
               Json{{"final_deviation", floating(to_double(conv.max_deviation.back()))}});
    }

    // Inverse lemma on random profiles.
    std::size_t lemma_ok = 0;
    const std::size_t profiles = 10;
    double worst_dev = 0, worst_schur = 0;
    for (std::size_t i = 0; i < profiles; ++i) {
        const BlockScaleProfile prof = corpus::random_block_profile(rng);
        NoiseSpec noise;
        noise.seed = rng();
        const auto rep = verify_inverse_lemma(prof, noise, {1e-4});
        const auto& pt = rep.points.front();
        worst_dev = std::max(worst_dev, pt.max_diagonal_deviation);
        worst_schur = std::max(worst_schur, pt.schur_discrepancy);
        if (!pt.flagged && pt.max_diagonal_deviation <= 1e-6 && pt.schur_discrepancy <= 1e-9) ++lemma_ok;
    }
    record("inverse lemma", profiles, lemma_ok == profiles,
           Json{{"max_diagonal_deviation", floating(worst_dev)}, {"max_schur_discrepancy", floating(worst_schur)}});

    // Graded inverse limits on theta.
    {
        DenseMatrix lambda0 = DenseMatrix::Zero(3, 3);
        lambda0(2, 2) = 2.0;
        const auto rep = graded_inverse_limits(bundled::theta_period_family(lambda0), bundled::theta(),
                                               bundled::layering(), bundled::target(), {1e-2, 1e-4, 1e-6});
        const auto& last = rep.points.back();
        const bool passed = !last.flagged && *std::max_element(last.block_deviation.begin(), last.block_deviation.end()) <= 1e-6
                            && last.pad_deviation <= 1e-9;
        record("graded inverse theta", rep.points.size(), passed);
    }

    r.json["checks"] = std::move(checks);
    r.json["all_passed"] = all;
    r.exit_code = all ? exit_ok : exit_assertion;
    r.table = table.render();
    return r;
}

} // namespace canon

#endif // CANON_REPORT_HPP
