/**
 * @file pdv.cpp
 * @brief Command-line verifier for scenario files.
 *
 * Commands:
 *   pdv verify <file>     run the checks of a scenario file
 *   pdv example <name>    run one of the shipped examples
 *   pdv list              list the shipped examples
 *
 * Exit status: 0 if every check passed, 1 if at least one check failed,
 * 2 if an error prevented the checks from running (bad JSON, schema
 * violation, unresolved reference, unreadable file).
 */

#include "examples.hpp"
#include "scenario.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int emit(const pdvcli::Report& rep, const std::string& format) {
    if (format == "json")
        std::cout << rep.to_json().dump(2) << "\n";
    else
        std::cout << rep.to_text();
    return rep.exit_code();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact symbolic verification of Courant-algebroid scenarios"};
    app.require_subcommand(1);

    std::string format = "text";
    app.add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    pdvcli::Options opts;
    app.add_option("--samples", opts.samples,
                   "Cap on the number of sample points used per check (0 = all)");
    app.add_option("--seed", opts.seed, "Seed for randomized probes and fuzzing")
        ->capture_default_str();

    std::string file;
    CLI::App* verify = app.add_subcommand("verify", "Run the checks of a scenario file");
    verify->add_option("file", file, "Scenario JSON file")->required();

    std::string example;
    CLI::App* run_example = app.add_subcommand("example", "Run a shipped example scenario");
    run_example->add_option("name", example, "Example name (see 'list')")->required();

    CLI::App* list = app.add_subcommand("list", "List the shipped examples");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            for (const auto& [name, text] : pdvcli::shipped_examples()) std::cout << name << "\n";
            return 0;
        }
        std::string text;
        if (verify->parsed()) {
            std::ifstream in(file);
            if (!in) throw pdvcli::ScenarioError("cannot read file '" + file + "'");
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        } else {
            const auto& ex = pdvcli::shipped_examples();
            auto it = ex.find(example);
            if (it == ex.end())
                throw pdvcli::ScenarioError("unknown example '" + example + "'");
            text = it->second;
        }
        return emit(pdvcli::run_scenario_text(text, opts), format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
