// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "relaylab/rng.hpp"

namespace relaylab
{
//---------------------------------------------------------------------------//
/*!
 * Geometry and fading statistics of the two-hop relay network.
 *
 * `relays` relays with `antennas` antennas each are split into group 1
 * (the first `group1` relays) and group 2 (the rest). Each complex channel
 * coefficient has variance sigma2 per quadrature, so E|h|^2 = 2 sigma2 and a
 * squared channel-vector norm is Erlang(antennas, scale 2 sigma2).
 */
class ChannelConfig
{
  public:
    ChannelConfig(int relays,
                  int group1,
                  int antennas,
                  double sigma_g2 = 1.0,
                  double sigma_h2 = 1.0,
                  double noise_r = 1.0,
                  double noise_d = 1.0);

    int relays() const { return relays_; }
    int group1_size() const { return group1_; }
    int group2_size() const { return relays_ - group1_; }
    int antennas() const { return antennas_; }
    double sigma_g2() const { return sigma_g2_; }
    double sigma_h2() const { return sigma_h2_; }
    double noise_r() const { return noise_r_; }
    double noise_d() const { return noise_d_; }

    bool operator==(ChannelConfig const&) const = default;

  private:
    int relays_;
    int group1_;
    int antennas_;
    double sigma_g2_;
    double sigma_h2_;
    double noise_r_;
    double noise_d_;
};

//---------------------------------------------------------------------------//
/*!
 * One block-fading realization.
 *
 * sr_gain[i] = ||h_{S,R_i}||^2 (power gain), rd_norm[i] = ||h_{R_i,D}||
 * (amplitude, so beamformed amplitudes add before squaring).
 */
struct NetworkState
{
    std::vector<double> sr_gain;
    std::vector<double> rd_norm;
};

//! Link side used in the RNG stream coordinate.
enum class LinkSide : std::uint32_t
{
    source_relay = 0,
    relay_destination = 1,
};

//! RNG stream id for one (relay, side) pair.
constexpr std::uint32_t fading_stream_id(int relay, LinkSide side)
{
    return static_cast<std::uint32_t>(relay) * 2u + static_cast<std::uint32_t>(side);
}

//! Sum of `shape` exponentials with mean 2 sigma2 drawn from `stream`.
double sample_erlang(CounterStream& stream, int shape, double sigma2);

//! Fading realization for slot `slot`; a pure function of (seed, slot, cfg).
NetworkState sample_state(std::uint64_t seed, std::uint64_t slot, ChannelConfig const& cfg);

//! In-place variant that reuses the vectors of `out`.
void sample_state(std::uint64_t seed,
                  std::uint64_t slot,
                  ChannelConfig const& cfg,
                  NetworkState& out);

/*!
 * Sequential view of the slot-indexed fading process.
 */
class FadingStream
{
  public:
    FadingStream(ChannelConfig cfg, std::uint64_t seed, std::uint64_t first_slot = 0)
        : cfg_(cfg), seed_(seed), slot_(first_slot)
    {
    }

    NetworkState next()
    {
        return sample_state(seed_, slot_++, cfg_);
    }

    std::uint64_t slot() const { return slot_; }

  private:
    ChannelConfig cfg_;
    std::uint64_t seed_;
    std::uint64_t slot_;
};

//---------------------------------------------------------------------------//
// Distribution functions
//---------------------------------------------------------------------------//

//! P(T <= t) for T ~ Erlang(shape, scale 2 sigma2).
double erlang_cdf(double t, int shape, double sigma2);

//! P(T > t); computed directly rather than as 1 - cdf.
double erlang_survival(double t, int shape, double sigma2);

//! CDF of the minimum of `group_size` i.i.d. Erlang(shape, 2 sigma2) gains.
double min_erlang_cdf(double z, int group_size, int shape, double sigma2);

/*!
 * Moment-matched Nakagami approximation to the density of a sum of
 * `group_size` i.i.d. Nakagami(shape) amplitudes: z^2 is treated as
 * Erlang(shape * group_size, scale 2 * group_size * sigma2).
 *
 * Exact for group_size = 1. For larger groups it overstates E[z^2]; with
 * unit-shape Rayleigh amplitudes and two relays it gives 8 sigma2 against
 * the true (4 + pi) sigma2.
 */
double nakagami_sum_pdf(double z, int group_size, int shape, double sigma2);

//! CDF matching `nakagami_sum_pdf`.
double nakagami_sum_cdf(double z, int group_size, int shape, double sigma2);

}  // namespace relaylab
