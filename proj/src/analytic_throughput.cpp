// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/analytic_throughput.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relaylab/errors.hpp"
#include "relaylab/special_functions.hpp"

namespace relaylab
{
namespace
{
// Beyond this the expansion has lost more than four digits to cancellation.
constexpr double max_expansion_condition = 1e4;

void check_power(double p, char const* fname)
{
    if (!(p > 0) || !std::isfinite(p))
        throw DomainError(std::string(fname) + ": power must be positive and finite");
}

void check_shape(int group_size, int shape, double sigma2, char const* fname)
{
    if (group_size < 1 || shape < 1)
        throw DomainError(std::string(fname) + ": group size and shape must be >= 1");
    if (!(sigma2 > 0))
        throw DomainError(std::string(fname) + ": sigma2 must be positive");
}

double positive_sum(std::vector<double> const& values)
{
    std::vector<SignedLogTerm> terms;
    terms.reserve(values.size());
    for (double v : values)
        terms.push_back({std::log(v), v > 0 ? 1 : 0});
    return sum_signed_log_terms(std::move(terms)).value;
}
}  // namespace

//---------------------------------------------------------------------------//
MomentExpansion shifted_pole_moment_expansion(int n, double a)
{
    if (n < 0)
        throw DomainError("shifted_pole_moment: order must be >= 0");
    if (!(a > 0))
        throw DomainError("shifted_pole_moment: a must be positive");

    double const log_a = std::log(a);
    std::vector<SignedLogTerm> terms;
    terms.reserve(n + 1);
    int const parity = (n % 2 == 0) ? 1 : -1;
    terms.push_back({n * log_a + std::log(exp_scaled_e1(a)), parity});
    for (int r = 1; r <= n; ++r)
    {
        int const sign = ((n - r) % 2 == 0) ? 1 : -1;
        terms.push_back({log_factorial(r - 1) + (n - r) * log_a, sign});
    }
    auto const s = sum_signed_log_terms(std::move(terms));
    return {s.value, s.condition};
}

double shifted_pole_moment(int n, double a)
{
    auto const expansion = shifted_pole_moment_expansion(n, a);
    if (expansion.condition <= max_expansion_condition && expansion.value > 0)
        return expansion.value;
    return std::exp(log_factorial(n)) * exp_scaled_en(n + 1, a);
}

//---------------------------------------------------------------------------//
std::vector<double>
broadcast_capacity_terms(double power, int group_size, int shape, double sigma2)
{
    check_power(power, "broadcast_capacity");
    check_shape(group_size, shape, sigma2, "broadcast_capacity");

    double const a = group_size / (2.0 * power * sigma2);
    double const log_group = std::log(static_cast<double>(group_size));

    // Moments are shared by every composition with the same total degree.
    std::vector<double> moments((shape - 1) * group_size + 1, -1.0);
    auto moment = [&](int p) {
        if (moments[p] < 0)
            moments[p] = shifted_pole_moment(p, a);
        return moments[p];
    };

    std::vector<double> terms;
    for_each_composition(group_size, shape, [&](std::span<int const> n) {
        // Part n[i] counts factors x^i / i! taken from the truncated series.
        int degree = 0;
        double log_q = 0.0;
        for (int i = 0; i < shape; ++i)
        {
            degree += i * n[i];
            log_q += n[i] * log_factorial(i);
        }
        double const log_coeff
            = log_multinomial(group_size, n) - log_q - degree * log_group;
        terms.push_back(std::exp(log_coeff) * moment(degree) / std::numbers::ln2);
    });
    return terms;
}

double broadcast_capacity(double power, int group_size, int shape, double sigma2)
{
    double const c = positive_sum(broadcast_capacity_terms(power, group_size, shape, sigma2));
    if (!std::isfinite(c))
        throw NumericalError("broadcast_capacity: non-finite result");
    return c;
}

double beamforming_capacity(double power, int group_size, int shape, double sigma2)
{
    check_power(power, "beamforming_capacity");
    check_shape(group_size, shape, sigma2, "beamforming_capacity");

    int const m = shape * group_size;
    double const a = 1.0 / (2.0 * power * group_size * sigma2);
    std::vector<double> terms;
    terms.reserve(m);
    for (int k = 0; k < m; ++k)
    {
        terms.push_back(std::exp(std::log(shifted_pole_moment(k, a)) - log_factorial(k))
                        / std::numbers::ln2);
    }
    double const c = positive_sum(terms);
    if (!std::isfinite(c))
        throw NumericalError("beamforming_capacity: non-finite result");
    return c;
}

//---------------------------------------------------------------------------//
std::string_view to_string(AdbBranch b)
{
    switch (b)
    {
        case AdbBranch::source_source:
            return "source-source";
        case AdbBranch::source_relay:
            return "source-relay";
        case AdbBranch::relay_source:
            return "relay-source";
        case AdbBranch::relay_relay:
            return "relay-relay";
    }
    return "unknown";
}

AdbClosedForm adb_closed(double ps, double pr, ChannelConfig const& cfg)
{
    check_power(ps, "adb_closed");
    check_power(pr, "adb_closed");

    double const ps_eff = ps / cfg.noise_r();
    double const pr_eff = pr / cfg.noise_d();
    int const n = cfg.antennas();

    AdbClosedForm r{};
    r.source_to_group1 = broadcast_capacity(ps_eff, cfg.group1_size(), n, cfg.sigma_g2());
    r.group1_to_dest = beamforming_capacity(pr_eff, cfg.group1_size(), n, cfg.sigma_h2());
    r.source_to_group2 = broadcast_capacity(ps_eff, cfg.group2_size(), n, cfg.sigma_g2());
    r.group2_to_dest = beamforming_capacity(pr_eff, cfg.group2_size(), n, cfg.sigma_h2());

    bool const g1_source = r.source_to_group1 <= r.group1_to_dest;
    bool const g2_source = r.source_to_group2 <= r.group2_to_dest;
    r.branch = g1_source ? (g2_source ? AdbBranch::source_source : AdbBranch::source_relay)
                         : (g2_source ? AdbBranch::relay_source : AdbBranch::relay_relay);
    r.throughput = 0.5 * std::min(r.source_to_group1, r.group1_to_dest)
                   + 0.5 * std::min(r.source_to_group2, r.group2_to_dest);
    return r;
}

}  // namespace relaylab
