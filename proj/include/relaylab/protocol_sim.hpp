// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "relaylab/channel_model.hpp"

namespace relaylab
{
//---------------------------------------------------------------------------//
enum class Protocol
{
    adb,       //!< alternate distributed beamforming
    sfd_mmrs,  //!< space full-duplex max-max relay selection
    crs,       //!< conventional (best end-to-end) relay selection
    df,        //!< all-relay decode-and-forward with beamforming
};

inline constexpr Protocol all_protocols[] = {
    Protocol::adb, Protocol::sfd_mmrs, Protocol::crs, Protocol::df};

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

enum class Method
{
    analytic,
    monte_carlo,
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view s);

//---------------------------------------------------------------------------//
struct SimConfig
{
    std::uint64_t slots = 1'000'000;
    std::uint64_t seed = 42;
    //! Worker threads; 0 uses the hardware concurrency. Results do not
    //! depend on this value.
    unsigned threads = 0;
};

/*!
 * Throughput in bps/Hz with its Monte Carlo standard error.
 *
 * For min-of-means quantities the error is that of the binding mean; if the
 * competing means are within one combined standard error of each other the
 * larger error is reported and `boundary_ambiguous` is set.
 */
struct ThroughputEstimate
{
    double value = 0;
    double std_error = 0;
    Method method = Method::monte_carlo;
    std::uint64_t slots_used = 0;
    bool boundary_ambiguous = false;

    static ThroughputEstimate analytic(double value)
    {
        return {value, 0.0, Method::analytic, 0, false};
    }
};

//---------------------------------------------------------------------------//
//! Relays chosen by the SFD-MMRS rule for one slot.
struct SfdSelection
{
    int receive;
    int transmit;

    bool operator==(SfdSelection const&) const = default;
};

/*!
 * Distinct receive/transmit relays: best source link and best destination
 * link, falling back to the better of (second receiver, best transmitter)
 * and (best receiver, second transmitter) when both bests coincide. Ties in
 * the argmax go to the lowest relay index.
 */
SfdSelection select_sfd(NetworkState const& state, double ps, double pr);

//---------------------------------------------------------------------------//
/*!
 * Per-slot sufficient statistics of a fading sample, retained so that one
 * sample set can be evaluated at many power splits.
 *
 * All protocols collected together see the same slot-indexed fading
 * realizations (common random numbers).
 */
class ProtocolSamples
{
  public:
    //! Draw `sim.slots` realizations and keep what `protocols` need.
    static ProtocolSamples collect(ChannelConfig const& cfg,
                                   SimConfig const& sim,
                                   std::span<Protocol const> protocols);

    /*!
     * Wrap explicit realizations with unit noise powers.
     *
     * `group1` is the size of relay group 1 and is only required (and
     * validated) when the alternating scheme is requested, so single-relay
     * states can still be fed to the selection and decode-and-forward
     * estimators.
     */
    static ProtocolSamples from_states(std::span<NetworkState const> states,
                                       std::span<Protocol const> protocols,
                                       int group1 = 0);

    bool has(Protocol p) const;
    std::uint64_t slots() const { return slots_; }
    int relays() const { return relays_; }

    //! Monte Carlo throughput at transmit powers (ps, pr).
    ThroughputEstimate evaluate(Protocol p, double ps, double pr) const;

  private:
    ProtocolSamples(int relays, int group1, std::uint64_t slots, unsigned threads);

    void reserve(std::span<Protocol const> protocols);
    void record(std::uint64_t slot, NetworkState const& state);

    ThroughputEstimate evaluate_adb(double ps, double pr) const;
    ThroughputEstimate evaluate_sfd(double ps, double pr) const;
    ThroughputEstimate evaluate_crs(double ps, double pr) const;
    ThroughputEstimate evaluate_df(double ps, double pr) const;

    int relays_;
    int group1_;
    double noise_r_ = 1.0;
    double noise_d_ = 1.0;
    std::uint64_t slots_;
    unsigned threads_;

    struct Adb
    {
        std::vector<double> min_gain1, beam_gain1, min_gain2, beam_gain2;
    };
    struct Sfd
    {
        std::vector<double> best_sr, second_sr, best_rd, second_rd;
        std::vector<std::uint8_t> same_relay;
    };
    struct Crs
    {
        std::vector<double> sr_gain, rd_gain;  // slot-major, relays() per slot
    };
    struct Df
    {
        std::vector<double> min_gain, beam_gain;
    };
    std::optional<Adb> adb_;
    std::optional<Sfd> sfd_;
    std::optional<Crs> crs_;
    std::optional<Df> df_;
};

//---------------------------------------------------------------------------//
// Single-protocol estimators
//---------------------------------------------------------------------------//

ThroughputEstimate sim_adb(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr);
ThroughputEstimate sim_crs(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr);
ThroughputEstimate
sim_sfd_mmrs(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr);
ThroughputEstimate sim_df(ChannelConfig const& cfg, SimConfig const& sim, double ps, double pr);

//---------------------------------------------------------------------------//
// Single-hop term estimators
//---------------------------------------------------------------------------//

/*!
 * Monte Carlo E[log2(1 + power * min_{i<group} T_i)], T_i ~ Erlang(shape,
 * scale 2 sigma2), for each power in `powers` using one shared sample.
 */
std::vector<ThroughputEstimate> estimate_broadcast_term(std::span<double const> powers,
                                                        int group_size,
                                                        int shape,
                                                        double sigma2,
                                                        SimConfig const& sim);

/*!
 * Monte Carlo E[log2(1 + power * (sum_{i<group} sqrt(T_i))^2)] with the
 * exact distribution of the amplitude sum (no approximation).
 */
std::vector<ThroughputEstimate> estimate_beamforming_term(std::span<double const> powers,
                                                          int group_size,
                                                          int shape,
                                                          double sigma2,
                                                          SimConfig const& sim);

}  // namespace relaylab
