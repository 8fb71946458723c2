// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "relaylab/protocol_sim.hpp"

namespace relaylab
{
enum class ExperimentKind
{
    ratio_sweep,     //!< throughput versus ps/pr on each protocol's budget
    snr_sweep,       //!< optimized throughput versus total SNR
    grouping_sweep,  //!< optimized ADB throughput versus group split M
    antenna_sweep,   //!< optimized throughput versus antennas per relay
    relay_sweep,     //!< optimized ADB throughput versus L at fixed total antennas
    validate,        //!< closed-form hop terms against Monte Carlo
};

std::string_view to_string(ExperimentKind k);
std::optional<ExperimentKind> parse_experiment(std::string_view s);

//! Channel fields as written in a config file; validated per sweep point.
struct ChannelParams
{
    int L = 4;
    int M = 2;
    int N_R = 3;
    double sigma_g2 = 1.0;
    double sigma_h2 = 1.0;
    double noise_r = 1.0;
    double noise_d = 1.0;

    ChannelConfig config() const;
};

//! Sweep axes and options. Only the keys relevant to the experiment are set.
struct SweepGrid
{
    std::vector<double> snr_db;
    std::vector<double> ratios;
    std::vector<int> group1_sizes;     // "M"
    std::vector<int> antennas;         // "N_R"
    std::vector<int> relays;           // "L"
    int total_antennas = 48;
    std::vector<Protocol> protocols;
    std::vector<int> group_sizes;      // validate
    std::vector<int> shapes;           // validate
    std::vector<double> powers;        // validate
    double tolerance = 1e-3;
};

struct ExperimentSpec
{
    ExperimentKind experiment = ExperimentKind::ratio_sweep;
    ChannelParams channel;
    SimConfig sim;
    std::vector<Method> methods{Method::analytic, Method::monte_carlo};
    SweepGrid grid;
    std::string output_path;

    bool uses(Method m) const;

    /*!
     * Parse and validate a config document, filling in per-experiment
     * defaults. Unknown keys and keys that do not apply to the chosen
     * experiment are rejected with ConfigError.
     */
    static ExperimentSpec from_json(nlohmann::json const& doc);

    //! Fully resolved spec; from_json(to_json()) reproduces it.
    nlohmann::json to_json() const;

    //! Checks axis values (divisibility, group bounds, non-empty grids).
    void validate() const;
};

//! Built-in defaults for an experiment (10^6 slots, seed 42).
ExperimentSpec default_spec(ExperimentKind kind);

//---------------------------------------------------------------------------//
struct SweepRow
{
    std::string protocol;
    int L = 0;
    int M = 0;
    int N_R = 0;
    double snr_db = 0;
    double ps = 0;
    double pr = 0;
    double throughput = 0;
    double std_error = 0;
    std::string method;

    bool operator==(SweepRow const&) const = default;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;
    //! Experiment-specific checks (e.g. analytic/MC gaps), for the summary.
    nlohmann::json checks = nlohmann::json::object();
};

SweepResult run_ratio_sweep(ExperimentSpec const& spec);
SweepResult run_snr_sweep(ExperimentSpec const& spec);
SweepResult run_grouping_sweep(ExperimentSpec const& spec);
SweepResult run_antenna_sweep(ExperimentSpec const& spec);
SweepResult run_relay_sweep(ExperimentSpec const& spec);
SweepResult run_validate(ExperimentSpec const& spec);

SweepResult run_experiment(ExperimentSpec const& spec);

//---------------------------------------------------------------------------//
// Output
//---------------------------------------------------------------------------//

inline constexpr std::string_view csv_header
    = "protocol,L,M,N_R,snr_db,ps,pr,throughput,std_error,method";

//! CSV with the fixed header; numbers use shortest round-trip formatting.
void write_csv(std::ostream& os, std::vector<SweepRow> const& rows);
std::string to_csv(std::vector<SweepRow> const& rows);
std::vector<SweepRow> read_csv(std::istream& is);

//! Build version string recorded in run summaries.
std::string_view version_string();

//! Sidecar summary: resolved spec, seed, version, row count and checks.
nlohmann::json make_summary(ExperimentSpec const& spec, SweepResult const& result);

//! "out/ratio.csv" -> "out/ratio.summary.json".
std::filesystem::path summary_path(std::filesystem::path const& csv_path);

//! Write CSV and summary to disk.
void write_outputs(ExperimentSpec const& spec,
                   SweepResult const& result,
                   std::filesystem::path const& csv_path);

}  // namespace relaylab
