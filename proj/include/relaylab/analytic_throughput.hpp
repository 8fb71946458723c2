// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>
#include <vector>

#include "relaylab/channel_model.hpp"

namespace relaylab
{
/*!
 * J_n(a) = int_0^inf y^n e^-y / (y + a) dy for n >= 0, a > 0.
 *
 * Every closed-form throughput term reduces to these moments. The primary
 * route is the finite expansion
 *   J_n(a) = (-a)^n e^a E1(a) + sum_{r=1}^{n} (r-1)! (-a)^{n-r},
 * accumulated in log space with sign tracking. When the expansion cancels
 * badly (large a relative to n) the identity J_n(a) = n! e^a E_{n+1}(a) is
 * used instead.
 */
double shifted_pole_moment(int n, double a);

//! The finite alternating expansion of J_n(a) only, with its condition number.
struct MomentExpansion
{
    double value;
    double condition;
};
MomentExpansion shifted_pole_moment_expansion(int n, double a);

//---------------------------------------------------------------------------//
/*!
 * E[log2(1 + power * min_{i<group} ||h_i||^2)] for i.i.d. Erlang(shape, 2 sigma2)
 * gains: the source-to-group hop of the alternating scheme. Exact.
 *
 * Expands (sum_{r<shape} x^r/r!)^group by the multinomial theorem; each
 * composition of `group` into `shape` parts contributes one positive term.
 */
double broadcast_capacity(double power, int group_size, int shape, double sigma2);

//! Individual composition terms of `broadcast_capacity`, in colex order.
std::vector<double>
broadcast_capacity_terms(double power, int group_size, int shape, double sigma2);

/*!
 * E[log2(1 + power * (sum_{i<group} ||h_i||)^2)] under the moment-matched
 * Nakagami sum approximation: the group-to-destination beamforming hop.
 * Exact for group_size = 1; overestimates otherwise (worst for shape = 1).
 */
double beamforming_capacity(double power, int group_size, int shape, double sigma2);

//---------------------------------------------------------------------------//
//! Which hop binds in each group's half of the alternating schedule.
enum class AdbBranch
{
    source_source,  //!< both groups limited by the source broadcast
    source_relay,   //!< group 1 by the broadcast, group 2 by beamforming
    relay_source,   //!< group 1 by beamforming, group 2 by the broadcast
    relay_relay,    //!< both limited by beamforming
};

std::string_view to_string(AdbBranch b);

/*!
 * Closed-form throughput of alternate distributed beamforming.
 *
 * Group 1 receives while group 2 beamforms, then the roles swap:
 *   throughput = 1/2 min(source_to_group1, group1_to_dest)
 *              + 1/2 min(source_to_group2, group2_to_dest).
 */
struct AdbClosedForm
{
    double source_to_group1;
    double group1_to_dest;
    double source_to_group2;
    double group2_to_dest;
    double throughput;
    AdbBranch branch;
};

AdbClosedForm adb_closed(double ps, double pr, ChannelConfig const& cfg);

}  // namespace relaylab
