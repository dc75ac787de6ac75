// Command-line front end: one subcommand per module area.

#include <canon/io.hpp>
#include <canon/report.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::string input;
    std::string formulation = "all";
    std::string grid = "6";
    std::string lambda0;
    std::string tolerance;
    std::uint64_t seed = 1;
    bool json = false;
    bool table = false;
};

void emit(const canon::Report& report, const Options& opt)
{
    // JSON is the default; --table alone selects the text rendering.
    const bool want_json = opt.json || !opt.table;
    if (want_json) std::cout << report.json.dump(2) << '\n';
    if (opt.table) std::cout << report.table;
}

std::vector<double> double_grid(const std::string& text)
{
    std::vector<double> out;
    for (const auto& t : canon::parse_grid(text)) out.push_back(canon::to_double(t));
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Canonical measures on metric graphs and tropical curves"};
    app.require_subcommand(1);
    Options opt;

    auto add_output = [&](CLI::App* sub) {
        sub->add_flag("--json", opt.json, "print the JSON report (default)");
        sub->add_flag("--table", opt.table, "print a human-readable table");
    };
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", opt.input, "graph document (JSON)")->required();
    };

    auto* measure = app.add_subcommand("measure", "Foster coefficients of a metric graph");
    add_input(measure);
    measure->add_option("--formulation", opt.formulation, "trees, projection, matrix or all")
        ->check(CLI::IsMember({"trees", "projection", "matrix", "all"}));
    add_output(measure);

    auto* minors = app.add_subcommand("minors", "graded minors of a layered graph");
    add_input(minors);
    add_output(minors);

    auto* trees = app.add_subcommand("trees", "spanning trees and their weights");
    add_input(trees);
    add_output(trees);

    auto* limit = app.add_subcommand("limit", "limits of Foster coefficients along a length family");
    add_input(limit);
    limit->add_option("--grid", opt.grid, "decade count k or comma-separated t values");
    limit->add_option("--tolerance", opt.tolerance, "assert the final deviation is at most this rational");
    add_output(limit);

    auto* periods = app.add_subcommand("periods", "block limits of inverse model period matrices");
    add_input(periods);
    periods->add_option("--lambda0", opt.lambda0, "JSON file with Im(Lambda_0)");
    periods->add_option("--grid", opt.grid, "decade count k or comma-separated t values");
    periods->add_option("--seed", opt.seed, "seed of the inverse-lemma perturbation");
    add_output(periods);

    auto* selftest = app.add_subcommand("selftest", "property checks over a seeded random corpus");
    selftest->add_option("--seed", opt.seed, "corpus seed");
    add_output(selftest);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : canon::exit_parse;
    }

    try {
        canon::Report report;
        if (*measure) {
            report = canon::cmd_measure(canon::load_document(opt.input), opt.formulation);
        } else if (*minors) {
            report = canon::cmd_minors(canon::load_document(opt.input));
        } else if (*trees) {
            report = canon::cmd_trees(canon::load_document(opt.input));
        } else if (*limit) {
            std::optional<canon::Rational> tolerance;
            if (!opt.tolerance.empty()) tolerance = canon::parse_rational(opt.tolerance);
            report = canon::cmd_limit(canon::load_document(opt.input), canon::parse_grid(opt.grid), tolerance);
        } else if (*periods) {
            std::optional<canon::DenseMatrix> lambda0;
            if (!opt.lambda0.empty()) lambda0 = canon::parse_lambda0(canon::read_file(opt.lambda0));
            report = canon::cmd_periods(canon::load_document(opt.input), lambda0, double_grid(opt.grid), opt.seed);
        } else if (*selftest) {
            report = canon::cmd_selftest(opt.seed);
        }
        emit(report, opt);
        return report.exit_code;
    } catch (const canon::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return canon::exit_parse;
    } catch (const canon::PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return canon::exit_precondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return canon::exit_precondition;
    }
}
