// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/power_allocation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "relaylab/errors.hpp"

namespace relaylab
{
double PowerBudget::source_weight() const
{
    switch (protocol)
    {
        case Protocol::adb:
        case Protocol::sfd_mmrs:
            return 1.0;
        case Protocol::crs:
        case Protocol::df:
            return 0.5;
    }
    return 1.0;
}

double PowerBudget::relay_weight() const
{
    switch (protocol)
    {
        case Protocol::adb:
            return 0.5 * relays;
        case Protocol::sfd_mmrs:
            return static_cast<double>(relays);
        case Protocol::crs:
        case Protocol::df:
            return 0.5 * relays;
    }
    return static_cast<double>(relays);
}

double PowerBudget::max_source_power() const
{
    return snr_total / source_weight();
}

double PowerBudget::spent(double ps, double pr) const
{
    return source_weight() * ps + relay_weight() * pr;
}

namespace
{
void check_budget(PowerBudget const& b)
{
    if (!(b.snr_total > 0) || !std::isfinite(b.snr_total))
        throw ConfigError("power budget must be positive and finite");
    if (b.relays < 1)
        throw ConfigError("power budget needs at least one relay");
}
}  // namespace

double budget_pr(PowerBudget const& budget, double ps)
{
    check_budget(budget);
    if (!(ps > 0) || !(ps < budget.max_source_power()))
    {
        throw DomainError("source power " + std::to_string(ps)
                          + " outside the feasible interval (0, "
                          + std::to_string(budget.max_source_power()) + ")");
    }
    return (budget.snr_total - budget.source_weight() * ps) / budget.relay_weight();
}

PowerPoint point_for_ratio(PowerBudget const& budget, double ratio)
{
    check_budget(budget);
    if (!(ratio > 0) || !std::isfinite(ratio))
        throw DomainError("power ratio must be positive and finite");
    double const pr
        = budget.snr_total / (budget.source_weight() * ratio + budget.relay_weight());
    return {ratio * pr, pr};
}

//---------------------------------------------------------------------------//
namespace
{
struct Probe
{
    double log_ratio;
    PowerPoint point;
    ThroughputEstimate estimate;
};

class Objective
{
  public:
    Objective(PowerBudget const& budget, ThroughputEvaluator const& evaluator)
        : budget_(budget), evaluator_(evaluator)
    {
    }

    Probe operator()(double log_ratio)
    {
        auto const point = point_for_ratio(budget_, std::exp(log_ratio));
        auto const estimate = evaluator_(point.ps, point.pr);
        ++evaluations_;
        if (!std::isfinite(estimate.value) || !std::isfinite(estimate.std_error))
        {
            throw NumericalError("evaluator returned a non-finite throughput at ps="
                                 + std::to_string(point.ps) + ", pr="
                                 + std::to_string(point.pr));
        }
        Probe p{log_ratio, point, estimate};
        if (!best_ || p.estimate.value > best_->estimate.value)
            best_ = p;
        return p;
    }

    int evaluations() const { return evaluations_; }
    Probe const& best() const { return *best_; }

  private:
    PowerBudget budget_;
    ThroughputEvaluator const& evaluator_;
    int evaluations_ = 0;
    std::optional<Probe> best_;
};

std::vector<Probe> scan(Objective& f, double lo, double hi, int points)
{
    std::vector<Probe> probes;
    probes.reserve(points);
    for (int i = 0; i < points; ++i)
    {
        double const x = (points == 1) ? lo : lo + (hi - lo) * i / (points - 1);
        probes.push_back(f(x));
    }
    return probes;
}

std::size_t best_index(std::vector<Probe> const& probes)
{
    return static_cast<std::size_t>(
        std::max_element(probes.begin(), probes.end(), [](auto const& a, auto const& b) {
            return a.estimate.value < b.estimate.value;
        })
        - probes.begin());
}

// True if some local peak other than the global one is separated from it by
// a valley deeper than three combined standard errors.
bool is_multimodal(std::vector<Probe> const& probes)
{
    auto const n = probes.size();
    auto const top = best_index(probes);
    auto value = [&](std::size_t i) { return probes[i].estimate.value; };
    auto se = [&](std::size_t i) { return probes[i].estimate.std_error; };
    for (std::size_t j = 0; j < n; ++j)
    {
        if (j == top)
            continue;
        bool const left_ok = (j == 0) || value(j) >= value(j - 1);
        bool const right_ok = (j + 1 == n) || value(j) >= value(j + 1);
        if (!left_ok || !right_ok)
            continue;
        auto const [lo, hi] = std::minmax(j, top);
        std::size_t valley = lo;
        for (std::size_t k = lo; k <= hi; ++k)
        {
            if (value(k) < value(valley))
                valley = k;
        }
        if (value(j) - value(valley) > 3.0 * std::hypot(se(j), se(valley)))
            return true;
    }
    return false;
}
}  // namespace

PowerOptimum maximize_throughput(PowerBudget const& budget,
                                 ThroughputEvaluator const& evaluator,
                                 double tolerance,
                                 OptimizerOptions const& options)
{
    check_budget(budget);
    if (!(tolerance > 0))
        throw ConfigError("optimizer tolerance must be positive");
    if (options.grid_points < 3 || options.dense_points < 3)
        throw ConfigError("optimizer grids need at least three points");
    if (!(options.ratio_min > 0) || !(options.ratio_max > options.ratio_min))
        throw ConfigError("optimizer ratio range must satisfy 0 < min < max");

    Objective f(budget, evaluator);
    double const lo = std::log(options.ratio_min);
    double const hi = std::log(options.ratio_max);

    auto probes = scan(f, lo, hi, options.grid_points);
    bool dense = false;
    if (is_multimodal(probes))
    {
        probes = scan(f, lo, hi, options.dense_points);
        dense = true;
    }

    auto const i = best_index(probes);
    double a = probes[i == 0 ? 0 : i - 1].log_ratio;
    double b = probes[std::min(i + 1, probes.size() - 1)].log_ratio;

    constexpr double inv_phi = 0.6180339887498948482;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c).estimate.value;
    double fd = f(d).estimate.value;
    while (b - a > tolerance)
    {
        if (fc >= fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c).estimate.value;
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d).estimate.value;
        }
    }

    auto const& best = f.best();
    return {best.point, best.estimate, f.evaluations(), dense};
}

}  // namespace relaylab
