// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
//! Command-line driver for the relaying experiments.
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "relaylab/errors.hpp"
#include "relaylab/experiments.hpp"

namespace
{
constexpr int exit_config = 1;
constexpr int exit_numerical = 2;

nlohmann::json load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw relaylab::ConfigError("cannot open config file '" + path + "'");
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw relaylab::ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
}
}  // namespace

int main(int argc, char** argv)
{
    using namespace relaylab;

    CLI::App app{"Throughput experiments for two-hop multi-antenna relaying"};
    app.set_version_flag("--version", std::string(version_string()));

    std::string experiment;
    std::string config_path;
    std::string output_path;
    std::uint64_t seed = 0;
    std::uint64_t slots = 0;
    unsigned threads = 0;
    bool analytic_only = false;
    bool mc_only = false;

    app.add_option("experiment", experiment,
                   "ratio-sweep | snr-sweep | grouping-sweep | antenna-sweep | "
                   "relay-sweep | validate")
        ->required();
    app.add_option("--config", config_path, "JSON config; built-in defaults if omitted");
    auto* out_opt = app.add_option("--output", output_path, "CSV path (summary alongside)");
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* slots_opt = app.add_option("--slots", slots, "Monte Carlo slots")
                          ->check(CLI::PositiveNumber);
    auto* threads_opt = app.add_option("--threads", threads, "worker threads (0: all cores)");
    auto* a_flag = app.add_flag("--analytic-only", analytic_only, "skip Monte Carlo");
    auto* m_flag = app.add_flag("--mc-only", mc_only, "skip closed forms");
    a_flag->excludes(m_flag);

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        auto const kind = parse_experiment(experiment);
        if (!kind)
            throw ConfigError("unknown experiment '" + experiment + "'");

        ExperimentSpec spec;
        if (config_path.empty())
        {
            spec = default_spec(*kind);
        }
        else
        {
            spec = ExperimentSpec::from_json(load_config(config_path));
            if (spec.experiment != *kind)
            {
                throw ConfigError("config is for '" + std::string(to_string(spec.experiment))
                                  + "', not '" + experiment + "'");
            }
        }

        if (*seed_opt)
            spec.sim.seed = seed;
        if (*slots_opt)
            spec.sim.slots = slots;
        if (*threads_opt)
            spec.sim.threads = threads;
        if (analytic_only)
            spec.methods = {Method::analytic};
        if (mc_only)
            spec.methods = {Method::monte_carlo};
        if (*out_opt)
            spec.output_path = output_path;
        spec.validate();

        auto const result = run_experiment(spec);
        for (auto const& w : result.warnings)
            std::cerr << "warning: " << w << '\n';
        write_outputs(spec, result, spec.output_path);
        std::cerr << "wrote " << result.rows.size() << " rows to " << spec.output_path << '\n';
        return 0;
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }
    catch (std::filesystem::filesystem_error const& e)
    {
        std::cerr << "I/O error: " << e.what() << '\n';
        return exit_config;
    }
    catch (DomainError const& e)
    {
        std::cerr << "domain error: " << e.what() << '\n';
        return exit_numerical;
    }
    catch (NumericalError const& e)
    {
        std::cerr << "numerical error: " << e.what() << '\n';
        return exit_numerical;
    }
}
