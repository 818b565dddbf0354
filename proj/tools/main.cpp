#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "paseig/errors.hpp"
#include "paseig/experiment.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw paseig::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void apply_env_overrides(paseig::SolverConfig& cfg) {
    if (const char* env = std::getenv("PASEIG_DENSE_CAP")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw paseig::ConfigError("PASEIG_DENSE_CAP must be a positive integer, got '" +
                                      std::string(env) + "'");
        cfg.dense_cap = static_cast<int>(v);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"paseig: eigenpairs of second-order elliptic operators on box domains,\n"
                 "computed by multigrid-accelerated corrections against a fixed coarse space,\n"
                 "one independent worker per eigenpair."};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_dir = "results";
    int workers = -1;
    bool quick = false;

    CLI::App* run = app.add_subcommand("run", "run an experiment and write its report files");
    CLI::Option* config_opt =
        run->add_option("--config", config_path, "experiment config file");
    run->add_option("--output", output_dir, "output directory (default: results)");
    run->add_option("--workers", workers, "override the worker thread count (0 = automatic)");
    run->add_flag("--quick", quick, "built-in smoke preset: laplace2d, 4 levels, 10 eigenpairs")
        ->excludes(config_opt);

    CLI::App* check = app.add_subcommand("check", "validate a config and print what it resolves to");
    check->add_option("--config", config_path, "experiment config file")->required();

    app.footer(paseig::kConfigKeyHelp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(run)) {
            paseig::ExperimentSpec spec;
            if (quick)
                spec = paseig::quick_preset();
            else if (!config_opt->count())
                throw paseig::ConfigError("run needs --config <path> or --quick");
            else
                spec = paseig::parse_config(read_file(config_path));
            if (workers >= 0) spec.solver.workers = workers;
            apply_env_overrides(spec.solver);
            paseig::validate(spec.solver);
            return paseig::run_experiment(spec, output_dir, std::cout);
        }
        paseig::ExperimentSpec spec = paseig::parse_config(read_file(config_path));
        apply_env_overrides(spec.solver);
        paseig::validate(spec.solver);
        paseig::print_config(spec, std::cout);
        std::cout << "ok\n";
        return 0;
    } catch (const paseig::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
