// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/protocol_sim.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "relaylab/analytic_throughput.hpp"
#include "relaylab/errors.hpp"

using namespace relaylab;

namespace
{
Protocol const adb_only[] = {Protocol::adb};
Protocol const crs_only[] = {Protocol::crs};
Protocol const df_only[] = {Protocol::df};
Protocol const sfd_only[] = {Protocol::sfd_mmrs};

// State from SNR-domain gains at unit powers.
NetworkState snr_state(std::vector<double> sr, std::vector<double> rd_gain)
{
    NetworkState s{sr, {}};
    for (double g : rd_gain)
        s.rd_norm.push_back(std::sqrt(g));
    return s;
}

struct Mean
{
    double mean = 0;
    double se = 0;
};

template<class F>
Mean mean_over_slots(std::uint64_t n, F&& f)
{
    double sum = 0, sum2 = 0;
    for (std::uint64_t i = 0; i < n; ++i)
    {
        double const x = f(i);
        sum += x;
        sum2 += x * x;
    }
    double const mean = sum / n;
    return {mean, std::sqrt((sum2 / n - mean * mean) / (n - 1))};
}
}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("hand-built single slots")
{
    SUBCASE("alternating scheme")
    {
        NetworkState const s{{4, 9}, {1, 2}};
        auto const e = ProtocolSamples::from_states({&s, 1}, adb_only, 1).evaluate(Protocol::adb, 1, 1);
        double const expected = 0.5 * std::log2(5.0) + 0.5 * std::log2(2.0);
        CHECK(e.value == doctest::Approx(expected).epsilon(1e-15));
        CHECK(e.value == doctest::Approx(1.6610).epsilon(1e-4));
    }
    SUBCASE("conventional selection")
    {
        auto const s = snr_state({3, 1}, {2, 5});
        auto const e = ProtocolSamples::from_states({&s, 1}, crs_only).evaluate(Protocol::crs, 1, 1);
        CHECK(e.value == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-15));
        CHECK(e.value == doctest::Approx(0.7925).epsilon(1e-4));
    }
    SUBCASE("decode-and-forward")
    {
        NetworkState const s{{4, 9}, {1, 2}};
        auto const e = ProtocolSamples::from_states({&s, 1}, df_only).evaluate(Protocol::df, 1, 1);
        CHECK(e.value == doctest::Approx(0.5 * std::log2(5.0)).epsilon(1e-15));
        CHECK(e.value == doctest::Approx(1.1610).epsilon(1e-4));
    }
    SUBCASE("single relay: selection and decode-and-forward coincide")
    {
        NetworkState const s{{2.5}, {1.7}};
        auto const crs = ProtocolSamples::from_states({&s, 1}, crs_only).evaluate(Protocol::crs, 3, 2);
        auto const df = ProtocolSamples::from_states({&s, 1}, df_only).evaluate(Protocol::df, 3, 2);
        CHECK(crs.value == doctest::Approx(0.5 * std::log2(1 + std::min(7.5, 2 * 1.7 * 1.7))));
        CHECK(crs.value == df.value);
        CHECK_THROWS_AS(ProtocolSamples::from_states({&s, 1}, adb_only, 1), ConfigError);
        CHECK_THROWS_AS(ProtocolSamples::from_states({&s, 1}, sfd_only), ConfigError);
    }
    SUBCASE("SFD-MMRS without a half-duplex prelog")
    {
        auto const s = snr_state({3, 1}, {2, 5});
        auto const e = ProtocolSamples::from_states({&s, 1}, sfd_only).evaluate(Protocol::sfd_mmrs, 1, 1);
        CHECK(e.value == doctest::Approx(std::min(std::log2(4.0), std::log2(6.0))));
    }
}

TEST_CASE("SFD-MMRS relay selection")
{
    CHECK(select_sfd(snr_state({3, 1}, {2, 5}), 1, 1) == SfdSelection{0, 1});
    CHECK(select_sfd(snr_state({5, 1}, {4, 2}), 1, 1) == SfdSelection{0, 1});
    CHECK(select_sfd(snr_state({1, 5}, {2, 9}), 1, 1) == SfdSelection{1, 0});
    // Second receiver wins when it keeps the stronger bottleneck
    CHECK(select_sfd(snr_state({5, 4}, {9, 1}), 1, 1) == SfdSelection{1, 0});
    // Ties go to the lowest index
    CHECK(select_sfd(snr_state({2, 2, 1}, {1, 3, 3}), 1, 1) == SfdSelection{0, 1});
    CHECK_THROWS_AS(select_sfd(snr_state({2}, {1}), 1, 1), ConfigError);

    ChannelConfig const cfg(5, 2, 2);
    for (std::uint64_t slot = 0; slot < 2000; ++slot)
    {
        auto const sel = select_sfd(sample_state(3, slot, cfg), 2.0, 0.5);
        CHECK(sel.receive != sel.transmit);
    }
}

TEST_CASE("stored statistics reproduce the per-slot selection rule")
{
    ChannelConfig const cfg(4, 2, 2);
    std::uint64_t const n = 5000;
    std::vector<NetworkState> states;
    for (std::uint64_t i = 0; i < n; ++i)
        states.push_back(sample_state(21, i, cfg));
    auto const samples = ProtocolSamples::from_states(states, sfd_only);
    for (auto [ps, pr] : {std::pair{1.0, 1.0}, {10.0, 0.3}, {0.2, 6.0}})
    {
        auto const sr = mean_over_slots(n, [&](std::uint64_t i) {
            return std::log2(1 + ps * states[i].sr_gain[select_sfd(states[i], ps, pr).receive]);
        });
        auto const rd = mean_over_slots(n, [&](std::uint64_t i) {
            double const h = states[i].rd_norm[select_sfd(states[i], ps, pr).transmit];
            return std::log2(1 + pr * h * h);
        });
        CHECK(samples.evaluate(Protocol::sfd_mmrs, ps, pr).value
              == doctest::Approx(std::min(sr.mean, rd.mean)).epsilon(1e-12));
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("common random numbers and determinism")
{
    ChannelConfig const cfg(4, 2, 3);
    SimConfig sim;
    sim.slots = 200'000;
    sim.seed = 17;
    sim.threads = 1;

    auto const all = ProtocolSamples::collect(cfg, sim, all_protocols);
    CHECK(all.evaluate(Protocol::adb, 3, 2).value == sim_adb(cfg, sim, 3, 2).value);
    CHECK(all.evaluate(Protocol::crs, 3, 2).value == sim_crs(cfg, sim, 3, 2).value);
    CHECK(all.evaluate(Protocol::sfd_mmrs, 3, 2).value == sim_sfd_mmrs(cfg, sim, 3, 2).value);
    CHECK(all.evaluate(Protocol::df, 3, 2).value == sim_df(cfg, sim, 3, 2).value);

    SimConfig threaded = sim;
    threaded.threads = 3;
    auto const par = ProtocolSamples::collect(cfg, threaded, all_protocols);
    for (auto p : all_protocols)
    {
        auto const a = all.evaluate(p, 4, 1.5);
        auto const b = par.evaluate(p, 4, 1.5);
        CHECK(a.value == b.value);
        CHECK(a.std_error == b.std_error);
    }

    // Fresh collection with the same seed reproduces bit-for-bit
    CHECK(sim_adb(cfg, sim, 1, 1).value == sim_adb(cfg, sim, 1, 1).value);
    SimConfig other = sim;
    other.seed = 18;
    CHECK(sim_adb(cfg, other, 1, 1).value != sim_adb(cfg, sim, 1, 1).value);
}

TEST_CASE("standard error shrinks by sqrt(2) when slots double")
{
    ChannelConfig const cfg(4, 2, 3);
    SimConfig a, b;
    a.slots = 200'000;
    b.slots = 400'000;
    for (auto p : {Protocol::crs, Protocol::df, Protocol::adb, Protocol::sfd_mmrs})
    {
        Protocol const only[] = {p};
        double const se_a = ProtocolSamples::collect(cfg, a, only).evaluate(p, 4, 2).std_error;
        double const se_b = ProtocolSamples::collect(cfg, b, only).evaluate(p, 4, 2).std_error;
        CAPTURE(to_string(p));
        CHECK(se_a / se_b == doctest::Approx(std::sqrt(2.0)).epsilon(0.1));
    }
}

TEST_CASE("symmetric statistics")
{
    SimConfig sim;
    sim.slots = 400'000;

    SUBCASE("two-relay SFD-MMRS hops balance under equal powers")
    {
        ChannelConfig const cfg(2, 1, 2);
        std::vector<NetworkState> states;
        for (std::uint64_t i = 0; i < sim.slots; ++i)
            states.push_back(sample_state(sim.seed, i, cfg));
        auto const sr = mean_over_slots(sim.slots, [&](std::uint64_t i) {
            return std::log2(1 + 3 * states[i].sr_gain[select_sfd(states[i], 3, 3).receive]);
        });
        auto const rd = mean_over_slots(sim.slots, [&](std::uint64_t i) {
            double const h = states[i].rd_norm[select_sfd(states[i], 3, 3).transmit];
            return std::log2(1 + 3 * h * h);
        });
        CHECK(std::fabs(sr.mean - rd.mean) <= 3 * std::hypot(sr.se, rd.se));
    }
    SUBCASE("alternating-scheme halves agree at M = L/2")
    {
        ChannelConfig const cfg(4, 2, 3);
        auto half = [&](int begin, double ps, double pr) {
            auto const src = mean_over_slots(sim.slots, [&](std::uint64_t i) {
                auto const s = sample_state(sim.seed, i, cfg);
                return std::log2(1 + ps * std::min(s.sr_gain[begin], s.sr_gain[begin + 1]));
            });
            auto const bf = mean_over_slots(sim.slots, [&](std::uint64_t i) {
                auto const s = sample_state(sim.seed, i, cfg);
                double const a = s.rd_norm[begin] + s.rd_norm[begin + 1];
                return std::log2(1 + pr * a * a);
            });
            return src.mean < bf.mean ? src : bf;
        };
        auto const h1 = half(0, 7.0, 1.5);
        auto const h2 = half(2, 7.0, 1.5);
        CHECK(std::fabs(h1.mean - h2.mean) <= 3 * std::hypot(h1.se, h2.se));
    }
}

TEST_CASE("estimates are non-negative and grow with both powers")
{
    ChannelConfig const cfg(4, 2, 3);
    SimConfig sim;
    sim.slots = 100'000;
    auto const samples = ProtocolSamples::collect(cfg, sim, all_protocols);
    for (auto p : all_protocols)
    {
        for (double scale : {0.01, 0.3, 1.0, 20.0})
        {
            auto const lo = samples.evaluate(p, 2 * scale, scale);
            auto const hi = samples.evaluate(p, 4 * scale, 2 * scale);
            CHECK(lo.value >= 0);
            CHECK(lo.std_error >= 0);
            CHECK(hi.value > lo.value);
            CHECK(lo.method == Method::monte_carlo);
            CHECK(lo.slots_used == sim.slots);
        }
    }
    CHECK_THROWS_AS(samples.evaluate(Protocol::adb, 0, 1), DomainError);
    CHECK_THROWS_AS(samples.evaluate(Protocol::adb, 1, -1), DomainError);
}

TEST_CASE("analytic estimates carry no error")
{
    auto const e = ThroughputEstimate::analytic(2.5);
    CHECK(e.std_error == 0);
    CHECK(e.method == Method::analytic);
}

TEST_CASE("protocol and method tags round-trip")
{
    for (auto p : all_protocols)
        CHECK(parse_protocol(to_string(p)) == p);
    CHECK(parse_method("monte-carlo") == Method::monte_carlo);
    CHECK(parse_method("analytic") == Method::analytic);
    CHECK_FALSE(parse_protocol("ADB").has_value());
}

TEST_CASE("uncollected protocols are rejected")
{
    ChannelConfig const cfg(4, 2, 3);
    SimConfig sim;
    sim.slots = 10;
    auto const samples = ProtocolSamples::collect(cfg, sim, crs_only);
    CHECK(samples.has(Protocol::crs));
    CHECK_FALSE(samples.has(Protocol::adb));
    CHECK_THROWS_AS(samples.evaluate(Protocol::adb, 1, 1), ConfigError);
    sim.slots = 0;
    CHECK_THROWS_AS(ProtocolSamples::collect(cfg, sim, crs_only), ConfigError);
}

TEST_CASE("hop-term estimators are exact where the closed forms are")
{
    SimConfig sim;
    sim.slots = 1'000'000;
    std::vector<double> const powers{0.1, 1, 10, 100};
    auto const bc = estimate_broadcast_term(powers, 3, 2, 1.0, sim);
    auto const bf = estimate_beamforming_term(powers, 1, 3, 1.0, sim);
    for (std::size_t k = 0; k < powers.size(); ++k)
    {
        CAPTURE(powers[k]);
        CHECK(std::fabs(bc[k].value - broadcast_capacity(powers[k], 3, 2, 1.0)) <= 3 * bc[k].std_error);
        CHECK(std::fabs(bf[k].value - beamforming_capacity(powers[k], 1, 3, 1.0)) <= 3 * bf[k].std_error);
    }
    CHECK_THROWS_AS(estimate_broadcast_term(std::vector<double>{0.0}, 1, 1, 1, sim), DomainError);
    CHECK_THROWS_AS(estimate_beamforming_term(powers, 0, 1, 1, sim), ConfigError);
}
