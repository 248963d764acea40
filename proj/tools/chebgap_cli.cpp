// chebgap: batch runner for Chebyshev / Widom experiments on finite-gap sets.

#include "chebgap/errors.hpp"
#include "chebgap/experiment.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int as_int(chebgap::ExitCode c) { return static_cast<int>(c); }

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw chebgap::ValidationError("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chebyshev polynomials and Widom minimizers on finite-gap sets"};
    app.require_subcommand(1);

    std::string config_path, output_override;
    auto* run = app.add_subcommand("run", "run an experiment config");
    run->add_option("config", config_path, "JSON config")->required();
    run->add_option("-o,--output", output_override, "override the output directory");

    std::string run_dir;
    std::size_t n = 0;
    auto* show = app.add_subcommand("show", "print a stored solution");
    show->add_option("dir", run_dir, "run directory")->required();
    show->add_option("n", n, "degree")->required();

    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", config_path, "JSON config")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : as_int(chebgap::ExitCode::validation);
    }

    try {
        if (*validate) {
            const auto cfg = chebgap::parse_config(read_text(config_path));
            std::cout << "config ok: " << cfg.intervals.size() << " intervals, n " << cfg.n_min
                      << ".." << cfg.n_max << "\n";
            return 0;
        }
        if (*show) {
            std::cout << chebgap::show_solution(run_dir, n);
            return 0;
        }
        const std::string text = read_text(config_path);
        auto cfg = chebgap::parse_config(text);
        if (!output_override.empty())
            cfg.output = output_override;
        const auto res = chebgap::run_experiment(cfg, text);
        for (const auto& s : res.suites)
            std::cout << (s.pass ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
        if (res.code != chebgap::ExitCode::ok)
            std::cerr << "error: " << res.message << "\n";
        else
            std::cout << res.rows.size() << " rows written to " << cfg.output.string() << "\n";
        return as_int(res.code);
    } catch (const chebgap::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return as_int(chebgap::ExitCode::validation);
    } catch (const chebgap::InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return as_int(chebgap::ExitCode::invariant);
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return as_int(chebgap::ExitCode::numerical);
    }
}
