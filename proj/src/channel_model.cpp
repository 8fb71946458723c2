// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "relaylab/errors.hpp"
#include "relaylab/special_functions.hpp"

namespace relaylab
{
namespace
{
void require_positive(double v, char const* name)
{
    if (!(v > 0) || !std::isfinite(v))
        throw ConfigError(std::string(name) + " must be positive and finite");
}

void check_distribution_args(double x, int shape, double sigma2, char const* fname)
{
    if (!(x >= 0))
        throw DomainError(std::string(fname) + ": argument must be non-negative");
    if (shape < 1)
        throw DomainError(std::string(fname) + ": shape must be >= 1");
    if (!(sigma2 > 0))
        throw DomainError(std::string(fname) + ": sigma2 must be positive");
}

// Q(shape, x) = e^-x sum_{r<shape} x^r / r!, terms formed in log space.
// Lower regularized gamma P(shape, x) by its convergent series; accurate
// (including in relative terms) for x below about shape + 1.
double lower_regularized_gamma_series(int shape, double x)
{
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < 1000; ++j)
    {
        term *= x / (shape + j);
        sum += term;
        if (term < sum * 1e-17)
            break;
    }
    return std::exp(shape * std::log(x) - x - log_factorial(shape)) * sum;
}

// Upper regularized gamma Q(shape, x) by its finite sum.
double upper_regularized_gamma_sum(int shape, double x)
{
    double const log_x = std::log(x);
    double sum = 0.0;
    for (int r = 0; r < shape; ++r)
        sum += std::exp(r * log_x - log_factorial(r) - x);
    return sum;
}

// (P, Q) for integer shape, each computed from the side where it is small.
std::pair<double, double> regularized_gamma_int(int shape, double x)
{
    if (x == 0.0)
        return {0.0, 1.0};
    if (std::isinf(x))
        return {1.0, 0.0};
    if (x < shape + 1.0)
    {
        double const p = std::clamp(lower_regularized_gamma_series(shape, x), 0.0, 1.0);
        return {p, 1.0 - p};
    }
    double const q = std::clamp(upper_regularized_gamma_sum(shape, x), 0.0, 1.0);
    return {1.0 - q, q};
}
}  // namespace

//---------------------------------------------------------------------------//
ChannelConfig::ChannelConfig(int relays,
                             int group1,
                             int antennas,
                             double sigma_g2,
                             double sigma_h2,
                             double noise_r,
                             double noise_d)
    : relays_(relays)
    , group1_(group1)
    , antennas_(antennas)
    , sigma_g2_(sigma_g2)
    , sigma_h2_(sigma_h2)
    , noise_r_(noise_r)
    , noise_d_(noise_d)
{
    if (relays < 1)
        throw ConfigError("relay count L must be >= 1");
    if (antennas < 1)
        throw ConfigError("antennas per relay N_R must be >= 1");
    if (group1 < 1 || group1 > relays - 1)
    {
        throw ConfigError("group size M must satisfy 1 <= M <= L-1 (got M="
                          + std::to_string(group1) + ", L=" + std::to_string(relays) + ")");
    }
    require_positive(sigma_g2, "sigma_g2");
    require_positive(sigma_h2, "sigma_h2");
    require_positive(noise_r, "noise_r");
    require_positive(noise_d, "noise_d");
}

//---------------------------------------------------------------------------//
double sample_erlang(CounterStream& stream, int shape, double sigma2)
{
    // Products of up to eight uniforms in (2^-54, 1) stay normal, so one log
    // per block of eight draws replaces eight separate logs.
    double log_sum = 0.0;
    int remaining = shape;
    while (remaining > 0)
    {
        int const block = std::min(remaining, 8);
        double product = 1.0;
        for (int i = 0; i < block; ++i)
            product *= stream.uniform();
        log_sum += std::log(product);
        remaining -= block;
    }
    return -2.0 * sigma2 * log_sum;
}

void sample_state(std::uint64_t seed,
                  std::uint64_t slot,
                  ChannelConfig const& cfg,
                  NetworkState& out)
{
    auto const n = static_cast<std::size_t>(cfg.relays());
    out.sr_gain.resize(n);
    out.rd_norm.resize(n);
    for (int i = 0; i < cfg.relays(); ++i)
    {
        CounterStream sr(seed, slot, fading_stream_id(i, LinkSide::source_relay));
        out.sr_gain[i] = sample_erlang(sr, cfg.antennas(), cfg.sigma_g2());
        CounterStream rd(seed, slot, fading_stream_id(i, LinkSide::relay_destination));
        out.rd_norm[i] = std::sqrt(sample_erlang(rd, cfg.antennas(), cfg.sigma_h2()));
    }
}

NetworkState sample_state(std::uint64_t seed, std::uint64_t slot, ChannelConfig const& cfg)
{
    NetworkState state;
    sample_state(seed, slot, cfg, state);
    return state;
}

//---------------------------------------------------------------------------//
double erlang_survival(double t, int shape, double sigma2)
{
    check_distribution_args(t, shape, sigma2, "erlang_cdf");
    return regularized_gamma_int(shape, t / (2.0 * sigma2)).second;
}

double erlang_cdf(double t, int shape, double sigma2)
{
    check_distribution_args(t, shape, sigma2, "erlang_cdf");
    return regularized_gamma_int(shape, t / (2.0 * sigma2)).first;
}

double min_erlang_cdf(double z, int group_size, int shape, double sigma2)
{
    check_distribution_args(z, shape, sigma2, "min_erlang_cdf");
    if (group_size < 1)
        throw DomainError("min_erlang_cdf: group_size must be >= 1");
    // 1 - Q^G, through log1p(-P) where P is the accurate side
    double const x = z / (2.0 * sigma2);
    auto const [p, q] = regularized_gamma_int(shape, x);
    double const cdf = (x < shape + 1.0) ? -std::expm1(group_size * std::log1p(-p))
                                         : 1.0 - std::pow(q, group_size);
    return std::clamp(cdf, 0.0, 1.0);
}

double nakagami_sum_pdf(double z, int group_size, int shape, double sigma2)
{
    check_distribution_args(z, shape, sigma2, "nakagami_sum_pdf");
    if (group_size < 1)
        throw DomainError("nakagami_sum_pdf: group_size must be >= 1");
    if (z == 0.0 || std::isinf(z))
        return 0.0;
    int const m = shape * group_size;
    double const theta = 2.0 * group_size * sigma2;
    double const log_pdf = std::log(2.0) + (2.0 * m - 1.0) * std::log(z) - z * z / theta
                           - m * std::log(theta) - log_factorial(m - 1);
    return std::exp(log_pdf);
}

double nakagami_sum_cdf(double z, int group_size, int shape, double sigma2)
{
    check_distribution_args(z, shape, sigma2, "nakagami_sum_cdf");
    if (group_size < 1)
        throw DomainError("nakagami_sum_cdf: group_size must be >= 1");
    return erlang_cdf(z * z, shape * group_size, group_size * sigma2);
}

}  // namespace relaylab
