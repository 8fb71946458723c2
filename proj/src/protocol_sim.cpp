// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/protocol_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "relaylab/errors.hpp"
#include "parallel.hpp"

namespace relaylab
{
namespace
{
double log2_1p(double x)
{
    return std::log1p(x) / std::numbers::ln2;
}

void check_powers(double ps, double pr)
{
    if (!(ps > 0) || !std::isfinite(ps) || !(pr > 0) || !std::isfinite(pr))
        throw DomainError("transmit powers must be positive and finite");
}

struct SampleMean
{
    double mean;
    double std_error;
};

struct BindingMin
{
    double value;
    double std_error;
    bool ambiguous;
};

BindingMin min_of_means(SampleMean const& x, SampleMean const& y)
{
    double const combined = std::hypot(x.std_error, y.std_error);
    SampleMean const& binding = (x.mean <= y.mean) ? x : y;
    if (std::fabs(x.mean - y.mean) < combined)
        return {binding.mean, std::max(x.std_error, y.std_error), true};
    return {binding.mean, binding.std_error, false};
}

/*!
 * Means and standard errors of K per-slot quantities.
 *
 * `fill(slot, values)` writes the K quantities for one slot. Sums are formed
 * per fixed-size chunk and reduced in chunk order.
 */
template<std::size_t K, class F>
std::array<SampleMean, K> chunked_means(std::uint64_t slots, unsigned threads, F&& fill)
{
    struct Partial
    {
        std::array<double, K> sum{};
        std::array<double, K> sum_sq{};
    };
    auto const chunks = detail::chunk_count(slots);
    std::vector<Partial> partials(chunks);
    detail::for_each_chunk(chunks, threads, [&](std::uint64_t c) {
        Partial p;
        std::array<double, K> v;
        auto const end = std::min(slots, (c + 1) * detail::chunk_slots);
        for (auto s = c * detail::chunk_slots; s < end; ++s)
        {
            fill(s, v);
            for (std::size_t k = 0; k < K; ++k)
            {
                p.sum[k] += v[k];
                p.sum_sq[k] += v[k] * v[k];
            }
        }
        partials[c] = p;
    });

    Partial total;
    for (auto const& p : partials)
    {
        for (std::size_t k = 0; k < K; ++k)
        {
            total.sum[k] += p.sum[k];
            total.sum_sq[k] += p.sum_sq[k];
        }
    }

    std::array<SampleMean, K> result;
    double const n = static_cast<double>(slots);
    for (std::size_t k = 0; k < K; ++k)
    {
        double const mean = total.sum[k] / n;
        double se = 0.0;
        if (slots > 1)
        {
            double const var = std::max(0.0, (total.sum_sq[k] - n * mean * mean) / (n - 1));
            se = std::sqrt(var / n);
        }
        result[k] = {mean, se};
    }
    return result;
}

// Index of the largest value, lowest index on ties, skipping `exclude`.
int argmax(std::span<double const> v, int exclude = -1)
{
    int best = -1;
    for (int i = 0; i < static_cast<int>(v.size()); ++i)
    {
        if (i == exclude)
            continue;
        if (best < 0 || v[i] > v[best])
            best = i;
    }
    return best;
}

ThroughputEstimate mc_estimate(double value, double se, std::uint64_t slots, bool ambiguous = false)
{
    return {value, se, Method::monte_carlo, slots, ambiguous};
}
}  // namespace

//---------------------------------------------------------------------------//
std::string_view to_string(Protocol p)
{
    switch (p)
    {
        case Protocol::adb:
            return "adb";
        case Protocol::sfd_mmrs:
            return "sfd-mmrs";
        case Protocol::crs:
            return "crs";
        case Protocol::df:
            return "df";
    }
    return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view s)
{
    for (auto p : all_protocols)
    {
        if (to_string(p) == s)
            return p;
    }
    return std::nullopt;
}

std::string_view to_string(Method m)
{
    return m == Method::analytic ? "analytic" : "monte-carlo";
}

std::optional<Method> parse_method(std::string_view s)
{
    if (s == "analytic")
        return Method::analytic;
    if (s == "monte-carlo")
        return Method::monte_carlo;
    return std::nullopt;
}

//---------------------------------------------------------------------------//
SfdSelection select_sfd(NetworkState const& state, double ps, double pr)
{
    auto const n = state.sr_gain.size();
    if (n < 2 || state.rd_norm.size() != n)
        throw ConfigError("select_sfd: need at least two relays");

    std::vector<double> sr(n), rd(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        sr[i] = ps * state.sr_gain[i];
        rd[i] = pr * state.rd_norm[i] * state.rd_norm[i];
    }
    int const r1 = argmax(sr);
    int const t1 = argmax(rd);
    if (r1 != t1)
        return {r1, t1};
    int const r2 = argmax(sr, r1);
    int const t2 = argmax(rd, t1);
    if (std::min(sr[r2], rd[t1]) > std::min(sr[r1], rd[t2]))
        return {r2, t1};
    return {r1, t2};
}

//---------------------------------------------------------------------------//
ProtocolSamples::ProtocolSamples(int relays, int group1, std::uint64_t slots, unsigned threads)
    : relays_(relays), group1_(group1), slots_(slots), threads_(threads)
{
}

void ProtocolSamples::reserve(std::span<Protocol const> protocols)
{
    auto const n = static_cast<std::size_t>(slots_);
    for (auto p : protocols)
    {
        switch (p)
        {
            case Protocol::adb:
                if (group1_ < 1 || group1_ > relays_ - 1)
                    throw ConfigError("alternating scheme needs 1 <= M <= L-1");
                adb_.emplace();
                for (auto* v : {&adb_->min_gain1, &adb_->beam_gain1, &adb_->min_gain2,
                                &adb_->beam_gain2})
                    v->resize(n);
                break;
            case Protocol::sfd_mmrs:
                if (relays_ < 2)
                    throw ConfigError("SFD-MMRS needs at least two relays");
                sfd_.emplace();
                for (auto* v : {&sfd_->best_sr, &sfd_->second_sr, &sfd_->best_rd,
                                &sfd_->second_rd})
                    v->resize(n);
                sfd_->same_relay.resize(n);
                break;
            case Protocol::crs:
                crs_.emplace();
                crs_->sr_gain.resize(n * relays_);
                crs_->rd_gain.resize(n * relays_);
                break;
            case Protocol::df:
                df_.emplace();
                df_->min_gain.resize(n);
                df_->beam_gain.resize(n);
                break;
        }
    }
}

void ProtocolSamples::record(std::uint64_t slot, NetworkState const& state)
{
    auto const& g = state.sr_gain;
    auto const& h = state.rd_norm;
    if (g.size() != static_cast<std::size_t>(relays_) || h.size() != g.size())
        throw ConfigError("network state does not match relay count");

    auto min_over = [&](int begin, int end) {
        return *std::min_element(g.begin() + begin, g.begin() + end);
    };
    auto beam_over = [&](int begin, int end) {
        double amplitude = 0.0;
        for (int i = begin; i < end; ++i)
            amplitude += h[i];
        return amplitude * amplitude;
    };

    if (adb_)
    {
        adb_->min_gain1[slot] = min_over(0, group1_);
        adb_->beam_gain1[slot] = beam_over(0, group1_);
        adb_->min_gain2[slot] = min_over(group1_, relays_);
        adb_->beam_gain2[slot] = beam_over(group1_, relays_);
    }
    if (df_)
    {
        df_->min_gain[slot] = min_over(0, relays_);
        df_->beam_gain[slot] = beam_over(0, relays_);
    }
    if (crs_)
    {
        auto const base = slot * static_cast<std::uint64_t>(relays_);
        for (int i = 0; i < relays_; ++i)
        {
            crs_->sr_gain[base + i] = g[i];
            crs_->rd_gain[base + i] = h[i] * h[i];
        }
    }
    if (sfd_)
    {
        // Amplitudes are non-negative, so ranking them ranks the gains.
        int const r1 = argmax(g);
        int const r2 = argmax(g, r1);
        int const t1 = argmax(h);
        int const t2 = argmax(h, t1);
        sfd_->best_sr[slot] = g[r1];
        sfd_->second_sr[slot] = g[r2];
        sfd_->best_rd[slot] = h[t1] * h[t1];
        sfd_->second_rd[slot] = h[t2] * h[t2];
        sfd_->same_relay[slot] = (r1 == t1);
    }
}

ProtocolSamples ProtocolSamples::collect(ChannelConfig const& cfg,
                                         SimConfig const& sim,
                                         std::span<Protocol const> protocols)
{
    if (sim.slots < 1)
        throw ConfigError("slots must be >= 1");
    ProtocolSamples samples(cfg.relays(), cfg.group1_size(), sim.slots, sim.threads);
    samples.noise_r_ = cfg.noise_r();
    samples.noise_d_ = cfg.noise_d();
    samples.reserve(protocols);

    auto const chunks = detail::chunk_count(sim.slots);
    detail::for_each_chunk(chunks, sim.threads, [&](std::uint64_t c) {
        NetworkState state;
        auto const end = std::min(sim.slots, (c + 1) * detail::chunk_slots);
        for (auto s = c * detail::chunk_slots; s < end; ++s)
        {
            sample_state(sim.seed, s, cfg, state);
            samples.record(s, state);
        }
    });
    return samples;
}

ProtocolSamples ProtocolSamples::from_states(std::span<NetworkState const> states,
                                             std::span<Protocol const> protocols,
                                             int group1)
{
    if (states.empty())
        throw ConfigError("from_states: need at least one state");
    int const relays = static_cast<int>(states.front().sr_gain.size());
    if (relays < 1)
        throw ConfigError("from_states: states must have at least one relay");
    ProtocolSamples samples(relays, group1, states.size(), 1);
    samples.reserve(protocols);
    for (std::size_t s = 0; s < states.size(); ++s)
        samples.record(s, states[s]);
    return samples;
}

bool ProtocolSamples::has(Protocol p) const
{
    switch (p)
    {
        case Protocol::adb:
            return adb_.has_value();
        case Protocol::sfd_mmrs:
            return sfd_.has_value();
        case Protocol::crs:
            return crs_.has_value();
        case Protocol::df:
            return df_.has_value();
    }
    return false;
}

//---------------------------------------------------------------------------//
ThroughputEstimate ProtocolSamples::evaluate(Protocol p, double ps, double pr) const
{
    check_powers(ps, pr);
    if (!has(p))
    {
        throw ConfigError("protocol " + std::string(to_string(p))
                          + " was not collected in this sample set");
    }
    double const ps_eff = ps / noise_r_;
    double const pr_eff = pr / noise_d_;
    switch (p)
    {
        case Protocol::adb:
            return evaluate_adb(ps_eff, pr_eff);
        case Protocol::sfd_mmrs:
            return evaluate_sfd(ps_eff, pr_eff);
        case Protocol::crs:
            return evaluate_crs(ps_eff, pr_eff);
        case Protocol::df:
            return evaluate_df(ps_eff, pr_eff);
    }
    throw ConfigError("unknown protocol");
}

ThroughputEstimate ProtocolSamples::evaluate_adb(double ps, double pr) const
{
    auto const& t = *adb_;
    auto const m = chunked_means<4>(slots_, threads_, [&](std::uint64_t s, auto& v) {
        v[0] = log2_1p(ps * t.min_gain1[s]);
        v[1] = log2_1p(pr * t.beam_gain1[s]);
        v[2] = log2_1p(ps * t.min_gain2[s]);
        v[3] = log2_1p(pr * t.beam_gain2[s]);
    });
    // Group 1 receives while group 2 beamforms, then the roles swap.
    auto const half1 = min_of_means(m[0], m[1]);
    auto const half2 = min_of_means(m[2], m[3]);
    return mc_estimate(0.5 * (half1.value + half2.value),
                       0.5 * std::hypot(half1.std_error, half2.std_error),
                       slots_,
                       half1.ambiguous || half2.ambiguous);
}

ThroughputEstimate ProtocolSamples::evaluate_sfd(double ps, double pr) const
{
    auto const& t = *sfd_;
    auto const m = chunked_means<2>(slots_, threads_, [&](std::uint64_t s, auto& v) {
        double sr = t.best_sr[s];
        double rd = t.best_rd[s];
        if (t.same_relay[s])
        {
            if (std::min(ps * t.second_sr[s], pr * t.best_rd[s])
                > std::min(ps * t.best_sr[s], pr * t.second_rd[s]))
                sr = t.second_sr[s];
            else
                rd = t.second_rd[s];
        }
        v[0] = log2_1p(ps * sr);
        v[1] = log2_1p(pr * rd);
    });
    // Full-duplex mimicking: no half-duplex prelog.
    auto const b = min_of_means(m[0], m[1]);
    return mc_estimate(b.value, b.std_error, slots_, b.ambiguous);
}

ThroughputEstimate ProtocolSamples::evaluate_crs(double ps, double pr) const
{
    auto const& t = *crs_;
    auto const relays = static_cast<std::uint64_t>(relays_);
    auto const m = chunked_means<1>(slots_, threads_, [&](std::uint64_t s, auto& v) {
        double best = 0.0;
        for (std::uint64_t i = s * relays; i < (s + 1) * relays; ++i)
            best = std::max(best, std::min(ps * t.sr_gain[i], pr * t.rd_gain[i]));
        v[0] = 0.5 * log2_1p(best);
    });
    return mc_estimate(m[0].mean, m[0].std_error, slots_);
}

ThroughputEstimate ProtocolSamples::evaluate_df(double ps, double pr) const
{
    auto const& t = *df_;
    auto const m = chunked_means<1>(slots_, threads_, [&](std::uint64_t s, auto& v) {
        v[0] = 0.5 * log2_1p(std::min(ps * t.min_gain[s], pr * t.beam_gain[s]));
    });
    return mc_estimate(m[0].mean, m[0].std_error, slots_);
}

//---------------------------------------------------------------------------//
namespace
{
ThroughputEstimate
simulate_one(Protocol p, ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr)
{
    check_powers(ps, pr);
    Protocol const only[] = {p};
    return ProtocolSamples::collect(cfg, sim, only).evaluate(p, ps, pr);
}
}  // namespace

ThroughputEstimate sim_adb(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr)
{
    return simulate_one(Protocol::adb, cfg, sim, ps, pr);
}

ThroughputEstimate sim_crs(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr)
{
    return simulate_one(Protocol::crs, cfg, sim, ps, pr);
}

ThroughputEstimate
sim_sfd_mmrs(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr)
{
    return simulate_one(Protocol::sfd_mmrs, cfg, sim, ps, pr);
}

ThroughputEstimate sim_df(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr)
{
    return simulate_one(Protocol::df, cfg, sim, ps, pr);
}

//---------------------------------------------------------------------------//
namespace
{
template<class GainFn>
std::vector<ThroughputEstimate> estimate_term(std::span<double const> powers,
                                              int group_size,
                                              int shape,
                                              double sigma2,
                                              SimConfig const& sim,
                                              GainFn&& gain)
{
    if (group_size < 1 || shape < 1 || !(sigma2 > 0))
        throw ConfigError("term estimator: invalid group size, shape or sigma2");
    if (sim.slots < 1)
        throw ConfigError("slots must be >= 1");
    for (double p : powers)
    {
        if (!(p > 0) || !std::isfinite(p))
            throw DomainError("term estimator: powers must be positive and finite");
    }

    std::vector<double> gains(sim.slots);
    detail::for_each_chunk(detail::chunk_count(sim.slots), sim.threads, [&](std::uint64_t c) {
        auto const end = std::min(sim.slots, (c + 1) * detail::chunk_slots);
        for (auto s = c * detail::chunk_slots; s < end; ++s)
            gains[s] = gain(s);
    });

    std::vector<ThroughputEstimate> result;
    result.reserve(powers.size());
    for (double p : powers)
    {
        auto const m = chunked_means<1>(sim.slots, sim.threads, [&](std::uint64_t s, auto& v) {
            v[0] = log2_1p(p * gains[s]);
        });
        result.push_back(mc_estimate(m[0].mean, m[0].std_error, sim.slots));
    }
    return result;
}
}  // namespace

std::vector<ThroughputEstimate> estimate_broadcast_term(std::span<double const> powers,
                                                        int group_size,
                                                        int shape,
                                                        double sigma2,
                                                        SimConfig const& sim)
{
    return estimate_term(powers, group_size, shape, sigma2, sim, [&](std::uint64_t s) {
        double smallest = 0.0;
        for (int i = 0; i < group_size; ++i)
        {
            CounterStream stream(sim.seed, s, fading_stream_id(i, LinkSide::source_relay));
            double const t = sample_erlang(stream, shape, sigma2);
            smallest = (i == 0) ? t : std::min(smallest, t);
        }
        return smallest;
    });
}

std::vector<ThroughputEstimate> estimate_beamforming_term(std::span<double const> powers,
                                                          int group_size,
                                                          int shape,
                                                          double sigma2,
                                                          SimConfig const& sim)
{
    return estimate_term(powers, group_size, shape, sigma2, sim, [&](std::uint64_t s) {
        double amplitude = 0.0;
        for (int i = 0; i < group_size; ++i)
        {
            CounterStream stream(sim.seed, s, fading_stream_id(i, LinkSide::relay_destination));
            amplitude += std::sqrt(sample_erlang(stream, shape, sigma2));
        }
        return amplitude * amplitude;
    });
}

}  // namespace relaylab
