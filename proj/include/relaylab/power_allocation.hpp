// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>

#include "relaylab/protocol_sim.hpp"

namespace relaylab
{
/*!
 * Total transmit-power budget of one protocol.
 *
 * Constraint source_weight * ps + relay_weight * pr <= snr_total:
 *  - adb:       ps + (L/2) pr   (source every slot, half the relays on average)
 *  - sfd-mmrs:  ps + L pr       (any relay may be picked to transmit)
 *  - crs, df:   (ps + L pr) / 2 (two-slot operation)
 */
struct PowerBudget
{
    Protocol protocol;
    double snr_total;
    int relays;

    double source_weight() const;
    double relay_weight() const;
    //! Supremum of feasible ps (reached only with pr = 0).
    double max_source_power() const;
    //! Left-hand side of the budget constraint at (ps, pr).
    double spent(double ps, double pr) const;
};

struct PowerPoint
{
    double ps;
    double pr;

    double ratio() const { return ps / pr; }
};

//! pr meeting the budget with equality; ps must lie in (0, max_source_power).
double budget_pr(PowerBudget const& budget, double ps);

//! The point on the budget-equality line with ps / pr = ratio > 0.
PowerPoint point_for_ratio(PowerBudget const& budget, double ratio);

using ThroughputEvaluator = std::function<ThroughputEstimate(double ps, double pr)>;

struct OptimizerOptions
{
    double ratio_min = 1e-2;
    double ratio_max = 1e2;
    int grid_points = 25;
    //! Points of the fallback scan used when the coarse grid is multimodal.
    int dense_points = 200;
};

struct PowerOptimum
{
    PowerPoint point;
    ThroughputEstimate estimate;
    int evaluations = 0;
    bool dense_fallback = false;
};

/*!
 * Maximize an evaluator along the budget-equality line.
 *
 * A log-spaced grid over ps/pr brackets the peak, then golden-section search
 * on ln(ps/pr) narrows the bracket to `tolerance` (a relative tolerance on
 * the ratio). If the grid shows more than one peak separated by a valley
 * deeper than three combined standard errors, the bracket comes from a dense
 * scan instead. The best evaluated point is returned.
 */
PowerOptimum maximize_throughput(PowerBudget const& budget,
                                 ThroughputEvaluator const& evaluator,
                                 double tolerance = 1e-3,
                                 OptimizerOptions const& options = {});

}  // namespace relaylab
