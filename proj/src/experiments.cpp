// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "relaylab/analytic_throughput.hpp"
#include "relaylab/errors.hpp"
#include "relaylab/power_allocation.hpp"

#ifndef RELAYLAB_VERSION
#    define RELAYLAB_VERSION "unknown"
#endif

namespace relaylab
{
using nlohmann::json;

namespace
{
constexpr std::pair<ExperimentKind, std::string_view> experiment_names[] = {
    {ExperimentKind::ratio_sweep, "ratio-sweep"},
    {ExperimentKind::snr_sweep, "snr-sweep"},
    {ExperimentKind::grouping_sweep, "grouping-sweep"},
    {ExperimentKind::antenna_sweep, "antenna-sweep"},
    {ExperimentKind::relay_sweep, "relay-sweep"},
    {ExperimentKind::validate, "validate"},
};

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

std::vector<double> log_space(double lo, double hi, int n)
{
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
    return v;
}

template<class T>
std::vector<T> int_range(T first, T last)
{
    std::vector<T> v;
    for (T i = first; i <= last; ++i)
        v.push_back(i);
    return v;
}

//---------------------------------------------------------------------------//
// JSON reading
//---------------------------------------------------------------------------//

void reject_unknown(json const& obj, std::set<std::string> const& allowed, std::string const& where)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be a JSON object");
    for (auto const& [key, value] : obj.items())
    {
        if (!allowed.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

int read_int(json const& v, std::string const& name)
{
    if (!v.is_number_integer())
        throw ConfigError(name + " must be an integer");
    return v.get<int>();
}

std::uint64_t read_u64(json const& v, std::string const& name)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(name + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

double read_double(json const& v, std::string const& name)
{
    if (!v.is_number())
        throw ConfigError(name + " must be a number");
    return v.get<double>();
}

template<class T, class F>
std::vector<T> read_array(json const& v, std::string const& name, F&& read_one)
{
    if (!v.is_array())
        throw ConfigError(name + " must be an array");
    std::vector<T> out;
    for (auto const& e : v)
        out.push_back(read_one(e, name));
    return out;
}

std::vector<Protocol> read_protocols(json const& v)
{
    return read_array<Protocol>(v, "grid.protocols", [](json const& e, std::string const& n) {
        if (!e.is_string())
            throw ConfigError(n + " entries must be strings");
        auto p = parse_protocol(e.get<std::string>());
        if (!p)
            throw ConfigError("unknown protocol '" + e.get<std::string>() + "'");
        return *p;
    });
}

std::set<std::string> grid_keys(ExperimentKind k)
{
    switch (k)
    {
        case ExperimentKind::ratio_sweep:
            return {"snr_db", "ratios", "protocols"};
        case ExperimentKind::snr_sweep:
            return {"snr_db", "protocols", "tolerance"};
        case ExperimentKind::grouping_sweep:
            return {"snr_db", "M", "tolerance"};
        case ExperimentKind::antenna_sweep:
            return {"snr_db", "N_R", "protocols", "tolerance"};
        case ExperimentKind::relay_sweep:
            return {"snr_db", "L", "total_antennas", "tolerance"};
        case ExperimentKind::validate:
            return {"group_sizes", "shapes", "powers"};
    }
    return {};
}

template<class T>
void require_increasing(std::vector<T> const& v, std::string const& name)
{
    if (v.empty())
        throw ConfigError("grid." + name + " must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i)
    {
        if (!(v[i - 1] < v[i]))
            throw ConfigError("grid." + name + " must be strictly increasing");
    }
}

//---------------------------------------------------------------------------//
// Sweep helpers
//---------------------------------------------------------------------------//

SweepRow make_row(Protocol p,
                  ChannelConfig const& cfg,
                  double snr_db,
                  PowerPoint point,
                  ThroughputEstimate const& e)
{
    return {std::string(to_string(p)),
            cfg.relays(),
            cfg.group1_size(),
            cfg.antennas(),
            snr_db,
            point.ps,
            point.pr,
            e.value,
            e.std_error,
            std::string(to_string(e.method))};
}

ThroughputEvaluator analytic_adb(ChannelConfig const& cfg)
{
    return [cfg](double ps, double pr) {
        return ThroughputEstimate::analytic(adb_closed(ps, pr, cfg).throughput);
    };
}

ThroughputEvaluator monte_carlo(ProtocolSamples const& samples, Protocol p)
{
    return [&samples, p](double ps, double pr) { return samples.evaluate(p, ps, pr); };
}

//! Rows of a sweep keyed by (protocol, axis index, method) and emitted in
//! that order regardless of evaluation order.
class RowTable
{
  public:
    void add(Protocol p, std::size_t axis, SweepRow row)
    {
        auto const method = parse_method(row.method).value_or(Method::monte_carlo);
        rows_[{static_cast<int>(p), axis, static_cast<int>(method)}] = std::move(row);
    }

    std::vector<SweepRow> ordered() const
    {
        std::vector<SweepRow> out;
        out.reserve(rows_.size());
        for (auto const& [key, row] : rows_)
            out.push_back(row);
        return out;
    }

  private:
    std::map<std::tuple<int, std::size_t, int>, SweepRow> rows_;
};

double relative_gap(double analytic, double mc)
{
    return (analytic - mc) / mc;
}

// Optimized throughput per protocol for one channel configuration.
void optimize_point(ExperimentSpec const& spec,
                    ChannelConfig const& cfg,
                    std::vector<Protocol> const& protocols,
                    ProtocolSamples const* samples,
                    double snr_db,
                    std::size_t axis,
                    RowTable& table,
                    json& gaps)
{
    for (auto p : protocols)
    {
        PowerBudget const budget{p, db_to_linear(snr_db), cfg.relays()};
        std::optional<PowerOptimum> analytic;
        std::optional<PowerOptimum> mc;
        if (p == Protocol::adb && spec.uses(Method::analytic))
        {
            analytic = maximize_throughput(budget, analytic_adb(cfg), spec.grid.tolerance);
            table.add(p, axis, make_row(p, cfg, snr_db, analytic->point, analytic->estimate));
        }
        if (samples && spec.uses(Method::monte_carlo))
        {
            mc = maximize_throughput(budget, monte_carlo(*samples, p), spec.grid.tolerance);
            table.add(p, axis, make_row(p, cfg, snr_db, mc->point, mc->estimate));
        }
        if (analytic && mc)
        {
            gaps.push_back({{"L", cfg.relays()},
                            {"M", cfg.group1_size()},
                            {"N_R", cfg.antennas()},
                            {"snr_db", snr_db},
                            {"analytic", analytic->estimate.value},
                            {"monte_carlo", mc->estimate.value},
                            {"std_error", mc->estimate.std_error},
                            {"relative_gap",
                             relative_gap(analytic->estimate.value, mc->estimate.value)}});
        }
    }
}

std::vector<Protocol> mc_protocols(ExperimentSpec const& spec, std::vector<Protocol> const& ps)
{
    return spec.uses(Method::monte_carlo) ? ps : std::vector<Protocol>{};
}

//---------------------------------------------------------------------------//
// CSV formatting
//---------------------------------------------------------------------------//

std::string format_double(double v)
{
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s)
{
    double v = 0;
    auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("malformed number in CSV: '" + std::string(s) + "'");
    return v;
}

int parse_int(std::string_view s)
{
    int v = 0;
    auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError("malformed integer in CSV: '" + std::string(s) + "'");
    return v;
}
}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(ExperimentKind k)
{
    for (auto const& [kind, name] : experiment_names)
    {
        if (kind == k)
            return name;
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_experiment(std::string_view s)
{
    for (auto const& [kind, name] : experiment_names)
    {
        if (name == s)
            return kind;
    }
    return std::nullopt;
}

ChannelConfig ChannelParams::config() const
{
    return ChannelConfig(L, M, N_R, sigma_g2, sigma_h2, noise_r, noise_d);
}

bool ExperimentSpec::uses(Method m) const
{
    return std::find(methods.begin(), methods.end(), m) != methods.end();
}

//---------------------------------------------------------------------------//
ExperimentSpec default_spec(ExperimentKind kind)
{
    ExperimentSpec spec;
    spec.experiment = kind;
    spec.output_path = std::string(to_string(kind)) + ".csv";
    auto& g = spec.grid;
    std::vector<Protocol> const all(std::begin(all_protocols), std::end(all_protocols));
    switch (kind)
    {
        case ExperimentKind::ratio_sweep:
            g.snr_db = {10.0};
            g.ratios = log_space(1e-2, 1e2, 25);
            g.protocols = all;
            break;
        case ExperimentKind::snr_sweep:
            for (int db = 0; db <= 20; db += 2)
                g.snr_db.push_back(db);
            g.protocols = all;
            break;
        case ExperimentKind::grouping_sweep:
            spec.channel.L = 6;
            spec.channel.M = 3;
            g.snr_db = {10.0};
            g.group1_sizes = int_range(1, spec.channel.L - 1);
            g.protocols = {Protocol::adb};
            break;
        case ExperimentKind::antenna_sweep:
            g.snr_db = {10.0};
            g.antennas = int_range(1, 6);
            g.protocols = all;
            break;
        case ExperimentKind::relay_sweep:
            g.snr_db = {10.0};
            g.relays = {2, 4, 6, 8, 12};
            g.total_antennas = 48;
            g.protocols = {Protocol::adb};
            break;
        case ExperimentKind::validate:
            g.group_sizes = {1, 2, 3};
            g.shapes = {1, 2, 3, 4};
            g.powers = {0.1, 1.0, 10.0, 100.0};
            break;
    }
    return spec;
}

ExperimentSpec ExperimentSpec::from_json(json const& doc)
{
    reject_unknown(doc, {"experiment", "channel", "sim", "grid", "output_path"}, "config");
    if (!doc.contains("experiment") || !doc["experiment"].is_string())
        throw ConfigError("config needs a string 'experiment'");
    auto const kind = parse_experiment(doc["experiment"].get<std::string>());
    if (!kind)
        throw ConfigError("unknown experiment '" + doc["experiment"].get<std::string>() + "'");

    ExperimentSpec spec = default_spec(*kind);

    if (doc.contains("channel"))
    {
        auto const& c = doc["channel"];
        reject_unknown(c, {"L", "M", "N_R", "sigma_g2", "sigma_h2", "noise_r", "noise_d"},
                       "channel");
        auto& ch = spec.channel;
        if (c.contains("L"))
            ch.L = read_int(c["L"], "channel.L");
        if (c.contains("M"))
            ch.M = read_int(c["M"], "channel.M");
        if (c.contains("N_R"))
            ch.N_R = read_int(c["N_R"], "channel.N_R");
        if (c.contains("sigma_g2"))
            ch.sigma_g2 = read_double(c["sigma_g2"], "channel.sigma_g2");
        if (c.contains("sigma_h2"))
            ch.sigma_h2 = read_double(c["sigma_h2"], "channel.sigma_h2");
        if (c.contains("noise_r"))
            ch.noise_r = read_double(c["noise_r"], "channel.noise_r");
        if (c.contains("noise_d"))
            ch.noise_d = read_double(c["noise_d"], "channel.noise_d");
        if (*kind == ExperimentKind::grouping_sweep && c.contains("L"))
            spec.grid.group1_sizes = int_range(1, ch.L - 1);
    }

    if (doc.contains("sim"))
    {
        auto const& s = doc["sim"];
        reject_unknown(s, {"slots", "seed", "threads", "methods"}, "sim");
        if (s.contains("slots"))
            spec.sim.slots = read_u64(s["slots"], "sim.slots");
        if (s.contains("seed"))
            spec.sim.seed = read_u64(s["seed"], "sim.seed");
        if (s.contains("threads"))
            spec.sim.threads = static_cast<unsigned>(read_u64(s["threads"], "sim.threads"));
        if (s.contains("methods"))
        {
            spec.methods = read_array<Method>(
                s["methods"], "sim.methods", [](json const& e, std::string const& n) {
                    auto m = e.is_string() ? parse_method(e.get<std::string>()) : std::nullopt;
                    if (!m)
                        throw ConfigError(n + " entries must be 'analytic' or 'monte-carlo'");
                    return *m;
                });
        }
    }

    if (doc.contains("grid"))
    {
        auto const& g = doc["grid"];
        reject_unknown(g, grid_keys(*kind), "grid for " + std::string(to_string(*kind)));
        auto& grid = spec.grid;
        if (g.contains("snr_db"))
        {
            grid.snr_db = g["snr_db"].is_array()
                              ? read_array<double>(g["snr_db"], "grid.snr_db", read_double)
                              : std::vector<double>{read_double(g["snr_db"], "grid.snr_db")};
        }
        if (g.contains("ratios"))
            grid.ratios = read_array<double>(g["ratios"], "grid.ratios", read_double);
        if (g.contains("M"))
            grid.group1_sizes = read_array<int>(g["M"], "grid.M", read_int);
        if (g.contains("N_R"))
            grid.antennas = read_array<int>(g["N_R"], "grid.N_R", read_int);
        if (g.contains("L"))
            grid.relays = read_array<int>(g["L"], "grid.L", read_int);
        if (g.contains("total_antennas"))
            grid.total_antennas = read_int(g["total_antennas"], "grid.total_antennas");
        if (g.contains("protocols"))
            grid.protocols = read_protocols(g["protocols"]);
        if (g.contains("group_sizes"))
            grid.group_sizes = read_array<int>(g["group_sizes"], "grid.group_sizes", read_int);
        if (g.contains("shapes"))
            grid.shapes = read_array<int>(g["shapes"], "grid.shapes", read_int);
        if (g.contains("powers"))
            grid.powers = read_array<double>(g["powers"], "grid.powers", read_double);
        if (g.contains("tolerance"))
            grid.tolerance = read_double(g["tolerance"], "grid.tolerance");
    }

    if (doc.contains("output_path"))
    {
        if (!doc["output_path"].is_string())
            throw ConfigError("output_path must be a string");
        spec.output_path = doc["output_path"].get<std::string>();
    }

    spec.validate();
    return spec;
}

void ExperimentSpec::validate() const
{
    if (sim.slots < 1)
        throw ConfigError("sim.slots must be >= 1");
    if (methods.empty())
        throw ConfigError("sim.methods must not be empty");
    if (output_path.empty())
        throw ConfigError("output_path must not be empty");

    auto const& g = grid;
    if (!(g.tolerance > 0))
        throw ConfigError("grid.tolerance must be positive");
    if (experiment != ExperimentKind::validate)
    {
        require_increasing(g.snr_db, "snr_db");
        if (experiment != ExperimentKind::snr_sweep && g.snr_db.size() != 1)
            throw ConfigError("grid.snr_db must be a single value for this experiment");
        if (g.protocols.empty())
            throw ConfigError("grid.protocols must not be empty");
    }

    switch (experiment)
    {
        case ExperimentKind::ratio_sweep:
            require_increasing(g.ratios, "ratios");
            channel.config();
            break;
        case ExperimentKind::snr_sweep:
            channel.config();
            break;
        case ExperimentKind::grouping_sweep:
            require_increasing(g.group1_sizes, "M");
            for (int m : g.group1_sizes)
            {
                ChannelParams c = channel;
                c.M = m;
                c.config();
            }
            break;
        case ExperimentKind::antenna_sweep:
            require_increasing(g.antennas, "N_R");
            for (int n : g.antennas)
            {
                ChannelParams c = channel;
                c.N_R = n;
                c.config();
            }
            break;
        case ExperimentKind::relay_sweep:
            require_increasing(g.relays, "L");
            if (g.total_antennas < 1)
                throw ConfigError("grid.total_antennas must be positive");
            for (int l : g.relays)
            {
                if (l < 2 || l % 2 != 0)
                    throw ConfigError("relay sweep needs even L >= 2 (got " + std::to_string(l) + ")");
                if (g.total_antennas % l != 0)
                {
                    throw ConfigError("L=" + std::to_string(l) + " does not divide "
                                      + std::to_string(g.total_antennas) + " total antennas");
                }
            }
            break;
        case ExperimentKind::validate:
            require_increasing(g.group_sizes, "group_sizes");
            require_increasing(g.shapes, "shapes");
            require_increasing(g.powers, "powers");
            if (g.group_sizes.front() < 1 || g.shapes.front() < 1 || !(g.powers.front() > 0))
                throw ConfigError("validate grid values must be positive");
            break;
    }
}

json ExperimentSpec::to_json() const
{
    json channel_doc = {{"L", channel.L},
                        {"M", channel.M},
                        {"N_R", channel.N_R},
                        {"sigma_g2", channel.sigma_g2},
                        {"sigma_h2", channel.sigma_h2},
                        {"noise_r", channel.noise_r},
                        {"noise_d", channel.noise_d}};
    json method_doc = json::array();
    for (auto m : methods)
        method_doc.push_back(to_string(m));
    json sim_doc = {{"slots", sim.slots},
                    {"seed", sim.seed},
                    {"threads", sim.threads},
                    {"methods", method_doc}};

    json grid_doc = json::object();
    auto const keys = grid_keys(experiment);
    auto put = [&](std::string const& key, json value) {
        if (keys.count(key))
            grid_doc[key] = std::move(value);
    };
    if (experiment == ExperimentKind::snr_sweep)
        put("snr_db", grid.snr_db);
    else if (!grid.snr_db.empty())
        put("snr_db", grid.snr_db.front());
    put("ratios", grid.ratios);
    put("M", grid.group1_sizes);
    put("N_R", grid.antennas);
    put("L", grid.relays);
    put("total_antennas", grid.total_antennas);
    json protocol_doc = json::array();
    for (auto p : grid.protocols)
        protocol_doc.push_back(to_string(p));
    put("protocols", protocol_doc);
    put("group_sizes", grid.group_sizes);
    put("shapes", grid.shapes);
    put("powers", grid.powers);
    put("tolerance", grid.tolerance);

    return {{"experiment", to_string(experiment)},
            {"channel", channel_doc},
            {"sim", sim_doc},
            {"grid", grid_doc},
            {"output_path", output_path}};
}

//---------------------------------------------------------------------------//
// Sweeps
//---------------------------------------------------------------------------//

SweepResult run_ratio_sweep(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::ratio_sweep)
        throw ConfigError("run_ratio_sweep: wrong experiment kind");
    spec.validate();

    auto const cfg = spec.channel.config();
    double const snr_db = spec.grid.snr_db.front();
    auto const protocols = mc_protocols(spec, spec.grid.protocols);
    std::optional<ProtocolSamples> samples;
    if (!protocols.empty())
        samples = ProtocolSamples::collect(cfg, spec.sim, protocols);

    SweepResult result;
    RowTable table;
    json gaps = json::array();
    for (auto p : spec.grid.protocols)
    {
        PowerBudget const budget{p, db_to_linear(snr_db), cfg.relays()};
        for (std::size_t i = 0; i < spec.grid.ratios.size(); ++i)
        {
            double const ratio = spec.grid.ratios[i];
            if (!(ratio > 0) || !std::isfinite(ratio))
            {
                result.warnings.push_back("skipping infeasible ratio " + format_double(ratio));
                continue;
            }
            auto const point = point_for_ratio(budget, ratio);
            std::optional<double> analytic;
            if (p == Protocol::adb && spec.uses(Method::analytic))
            {
                auto const e = ThroughputEstimate::analytic(
                    adb_closed(point.ps, point.pr, cfg).throughput);
                analytic = e.value;
                table.add(p, i, make_row(p, cfg, snr_db, point, e));
            }
            if (samples)
            {
                auto const e = samples->evaluate(p, point.ps, point.pr);
                table.add(p, i, make_row(p, cfg, snr_db, point, e));
                if (analytic)
                {
                    gaps.push_back({{"ratio", ratio},
                                    {"analytic", *analytic},
                                    {"monte_carlo", e.value},
                                    {"std_error", e.std_error},
                                    {"relative_gap", relative_gap(*analytic, e.value)}});
                }
            }
        }
    }
    result.rows = table.ordered();
    result.checks["adb_analytic_vs_mc"] = gaps;
    return result;
}

SweepResult run_snr_sweep(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::snr_sweep)
        throw ConfigError("run_snr_sweep: wrong experiment kind");
    spec.validate();

    auto const cfg = spec.channel.config();
    auto const protocols = mc_protocols(spec, spec.grid.protocols);
    std::optional<ProtocolSamples> samples;
    if (!protocols.empty())
        samples = ProtocolSamples::collect(cfg, spec.sim, protocols);

    SweepResult result;
    RowTable table;
    json gaps = json::array();
    for (std::size_t i = 0; i < spec.grid.snr_db.size(); ++i)
    {
        optimize_point(spec, cfg, spec.grid.protocols, samples ? &*samples : nullptr,
                       spec.grid.snr_db[i], i, table, gaps);
    }
    result.rows = table.ordered();
    result.checks["adb_analytic_vs_mc"] = gaps;
    return result;
}

SweepResult run_grouping_sweep(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::grouping_sweep)
        throw ConfigError("run_grouping_sweep: wrong experiment kind");
    spec.validate();

    SweepResult result;
    RowTable table;
    json gaps = json::array();
    std::vector<Protocol> const adb_only{Protocol::adb};
    for (std::size_t i = 0; i < spec.grid.group1_sizes.size(); ++i)
    {
        ChannelParams params = spec.channel;
        params.M = spec.grid.group1_sizes[i];
        auto const cfg = params.config();
        std::optional<ProtocolSamples> samples;
        if (spec.uses(Method::monte_carlo))
            samples = ProtocolSamples::collect(cfg, spec.sim, adb_only);
        optimize_point(spec, cfg, adb_only, samples ? &*samples : nullptr,
                       spec.grid.snr_db.front(), i, table, gaps);
    }
    result.rows = table.ordered();
    result.checks["adb_analytic_vs_mc"] = gaps;
    return result;
}

SweepResult run_antenna_sweep(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::antenna_sweep)
        throw ConfigError("run_antenna_sweep: wrong experiment kind");
    spec.validate();

    SweepResult result;
    RowTable table;
    json gaps = json::array();
    auto const protocols = mc_protocols(spec, spec.grid.protocols);
    for (std::size_t i = 0; i < spec.grid.antennas.size(); ++i)
    {
        ChannelParams params = spec.channel;
        params.N_R = spec.grid.antennas[i];
        auto const cfg = params.config();
        std::optional<ProtocolSamples> samples;
        if (!protocols.empty())
            samples = ProtocolSamples::collect(cfg, spec.sim, protocols);
        optimize_point(spec, cfg, spec.grid.protocols, samples ? &*samples : nullptr,
                       spec.grid.snr_db.front(), i, table, gaps);
    }
    result.rows = table.ordered();
    result.checks["adb_analytic_vs_mc"] = gaps;
    return result;
}

SweepResult run_relay_sweep(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::relay_sweep)
        throw ConfigError("run_relay_sweep: wrong experiment kind");
    spec.validate();

    SweepResult result;
    RowTable table;
    json gaps = json::array();
    std::vector<Protocol> const adb_only{Protocol::adb};
    for (std::size_t i = 0; i < spec.grid.relays.size(); ++i)
    {
        ChannelParams params = spec.channel;
        params.L = spec.grid.relays[i];
        params.M = params.L / 2;
        params.N_R = spec.grid.total_antennas / params.L;
        auto const cfg = params.config();
        std::optional<ProtocolSamples> samples;
        if (spec.uses(Method::monte_carlo))
            samples = ProtocolSamples::collect(cfg, spec.sim, adb_only);
        optimize_point(spec, cfg, adb_only, samples ? &*samples : nullptr,
                       spec.grid.snr_db.front(), i, table, gaps);
    }
    result.rows = table.ordered();
    result.checks["adb_analytic_vs_mc"] = gaps;
    return result;
}

SweepResult run_validate(ExperimentSpec const& spec)
{
    if (spec.experiment != ExperimentKind::validate)
        throw ConfigError("run_validate: wrong experiment kind");
    spec.validate();

    auto const& g = spec.grid;
    SweepResult result;
    json checks = json::array();

    enum class Term
    {
        broadcast,
        beamform
    };
    for (auto term : {Term::broadcast, Term::beamform})
    {
        std::string const tag = (term == Term::broadcast) ? "broadcast" : "beamform";
        double const sigma2
            = (term == Term::broadcast) ? spec.channel.sigma_g2 : spec.channel.sigma_h2;
        for (int group : g.group_sizes)
        {
            for (int shape : g.shapes)
            {
                std::vector<ThroughputEstimate> mc;
                if (spec.uses(Method::monte_carlo))
                {
                    mc = (term == Term::broadcast)
                             ? estimate_broadcast_term(g.powers, group, shape, sigma2, spec.sim)
                             : estimate_beamforming_term(g.powers, group, shape, sigma2, spec.sim);
                }
                for (std::size_t k = 0; k < g.powers.size(); ++k)
                {
                    double const power = g.powers[k];
                    SweepRow base{tag,
                                  2 * group,
                                  group,
                                  shape,
                                  10.0 * std::log10(power),
                                  term == Term::broadcast ? power : 0.0,
                                  term == Term::beamform ? power : 0.0,
                                  0.0,
                                  0.0,
                                  ""};
                    std::optional<double> analytic;
                    if (spec.uses(Method::analytic))
                    {
                        analytic = (term == Term::broadcast)
                                       ? broadcast_capacity(power, group, shape, sigma2)
                                       : beamforming_capacity(power, group, shape, sigma2);
                        SweepRow row = base;
                        row.throughput = *analytic;
                        row.method = std::string(to_string(Method::analytic));
                        result.rows.push_back(row);
                    }
                    if (!mc.empty())
                    {
                        SweepRow row = base;
                        row.throughput = mc[k].value;
                        row.std_error = mc[k].std_error;
                        row.method = std::string(to_string(Method::monte_carlo));
                        result.rows.push_back(row);
                    }
                    if (analytic && !mc.empty())
                    {
                        checks.push_back(
                            {{"term", tag},
                             {"group_size", group},
                             {"shape", shape},
                             {"power", power},
                             {"analytic", *analytic},
                             {"monte_carlo", mc[k].value},
                             {"std_error", mc[k].std_error},
                             {"z_score", (*analytic - mc[k].value) / mc[k].std_error},
                             {"relative_gap", relative_gap(*analytic, mc[k].value)}});
                    }
                }
            }
        }
    }
    result.checks["terms"] = checks;
    return result;
}

SweepResult run_experiment(ExperimentSpec const& spec)
{
    switch (spec.experiment)
    {
        case ExperimentKind::ratio_sweep:
            return run_ratio_sweep(spec);
        case ExperimentKind::snr_sweep:
            return run_snr_sweep(spec);
        case ExperimentKind::grouping_sweep:
            return run_grouping_sweep(spec);
        case ExperimentKind::antenna_sweep:
            return run_antenna_sweep(spec);
        case ExperimentKind::relay_sweep:
            return run_relay_sweep(spec);
        case ExperimentKind::validate:
            return run_validate(spec);
    }
    throw ConfigError("unknown experiment");
}

//---------------------------------------------------------------------------//
// Output
//---------------------------------------------------------------------------//

void write_csv(std::ostream& os, std::vector<SweepRow> const& rows)
{
    os << csv_header << '\n';
    for (auto const& r : rows)
    {
        os << r.protocol << ',' << r.L << ',' << r.M << ',' << r.N_R << ','
           << format_double(r.snr_db) << ',' << format_double(r.ps) << ','
           << format_double(r.pr) << ',' << format_double(r.throughput) << ','
           << format_double(r.std_error) << ',' << r.method << '\n';
    }
}

std::string to_csv(std::vector<SweepRow> const& rows)
{
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

std::vector<SweepRow> read_csv(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != csv_header)
        throw ConfigError("CSV header mismatch");

    std::vector<SweepRow> rows;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string_view> fields;
        std::string_view rest(line);
        while (true)
        {
            auto const comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 10)
            throw ConfigError("CSV row has " + std::to_string(fields.size()) + " fields");
        rows.push_back({std::string(fields[0]),
                        parse_int(fields[1]),
                        parse_int(fields[2]),
                        parse_int(fields[3]),
                        parse_double(fields[4]),
                        parse_double(fields[5]),
                        parse_double(fields[6]),
                        parse_double(fields[7]),
                        parse_double(fields[8]),
                        std::string(fields[9])});
    }
    return rows;
}

std::string_view version_string()
{
    return RELAYLAB_VERSION;
}

json make_summary(ExperimentSpec const& spec, SweepResult const& result)
{
    return {{"spec", spec.to_json()},
            {"seed", spec.sim.seed},
            {"version", version_string()},
            {"rows", result.rows.size()},
            {"warnings", result.warnings},
            {"checks", result.checks}};
}

std::filesystem::path summary_path(std::filesystem::path const& csv_path)
{
    auto p = csv_path;
    p.replace_extension(".summary.json");
    return p;
}

void write_outputs(ExperimentSpec const& spec,
                   SweepResult const& result,
                   std::filesystem::path const& csv_path)
{
    if (csv_path.has_parent_path())
        std::filesystem::create_directories(csv_path.parent_path());
    {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv)
            throw ConfigError("cannot open " + csv_path.string() + " for writing");
        write_csv(csv, result.rows);
    }
    std::ofstream summary(summary_path(csv_path), std::ios::binary);
    if (!summary)
        throw ConfigError("cannot open summary file for writing");
    summary << make_summary(spec, result).dump(2) << '\n';
}

}  // namespace relaylab
