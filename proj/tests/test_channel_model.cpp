// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <doctest.h>

#include "relaylab/errors.hpp"
#include "relaylab/rng.hpp"
#include <boost/math/distributions/gamma.hpp>

#include "oracles.hpp"

using namespace relaylab;

namespace
{
struct Moments
{
    double mean = 0;
    double se = 0;
};

template<class F>
Moments sample_moments(std::size_t n, F&& draw)
{
    double sum = 0, sum2 = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        double const x = draw(i);
        sum += x;
        sum2 += x * x;
    }
    double const mean = sum / n;
    double const var = (sum2 - n * mean * mean) / (n - 1);
    return {mean, std::sqrt(var / n)};
}
}  // namespace

//---------------------------------------------------------------------------//
TEST_CASE("Philox known-answer vectors")
{
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0})
          == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::generate(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u})
          == C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                               K{0xa4093822, 0x299f31d0})
          == C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are open-interval uniforms addressed by coordinate")
{
    CounterStream a(7, 123, 4);
    CounterStream b(7, 123, 4);
    CounterStream c(7, 124, 4);
    double sum = 0;
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 100000; ++i)
    {
        double const u = a.uniform();
        CHECK((u > 0 && u < 1));
        all_equal = all_equal && (u == b.uniform());
        any_diff = any_diff || (u != c.uniform());
        sum += u;
    }
    CHECK(all_equal);
    CHECK(any_diff);
    CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

//---------------------------------------------------------------------------//
TEST_CASE("config validation")
{
    CHECK_NOTHROW(ChannelConfig(4, 2, 3));
    CHECK_NOTHROW(ChannelConfig(2, 1, 1));
    CHECK_THROWS_AS(ChannelConfig(4, 0, 3), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 4, 3), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(1, 1, 3), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 2, 0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 2, 3, 0.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 2, 3, 1.0, -1.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 2, 3, 1.0, 1.0, 0.0), ConfigError);
    CHECK_THROWS_AS(ChannelConfig(4, 2, 3, 1.0, 1.0, 1.0, std::nan("")), ConfigError);

    ChannelConfig const cfg(6, 2, 3);
    CHECK(cfg.group1_size() == 2);
    CHECK(cfg.group2_size() == 4);
}

TEST_CASE("sampled gain means")
{
    std::size_t const n = 1'000'000;
    SUBCASE("one antenna: exponential with mean 2")
    {
        ChannelConfig const cfg(2, 1, 1);
        auto m = sample_moments(n, [&](std::size_t i) { return sample_state(1, i, cfg).sr_gain[0]; });
        CHECK(std::fabs(m.mean - 2.0) <= 0.01);
    }
    SUBCASE("three antennas: Erlang mean 6")
    {
        ChannelConfig const cfg(2, 1, 3);
        auto m = sample_moments(n, [&](std::size_t i) { return sample_state(2, i, cfg).sr_gain[1]; });
        CHECK(std::fabs(m.mean - 6.0) <= 0.02);
    }
    SUBCASE("marginals scale with the fading parameters")
    {
        ChannelConfig const cfg(3, 1, 2, 0.5, 1.5);
        NetworkState s;
        auto sr = sample_moments(n, [&](std::size_t i) {
            sample_state(3, i, cfg, s);
            return s.sr_gain[2];
        });
        auto rd = sample_moments(n, [&](std::size_t i) {
            sample_state(3, i, cfg, s);
            return s.rd_norm[0] * s.rd_norm[0];
        });
        CHECK(std::fabs(sr.mean - 2 * 2 * 0.5) <= 3 * sr.se);
        CHECK(std::fabs(rd.mean - 2 * 2 * 1.5) <= 3 * rd.se);
    }
}

TEST_CASE("sampling is deterministic and shaped by the config")
{
    ChannelConfig const cfg(4, 2, 3);
    FadingStream a(cfg, 99), b(cfg, 99);
    for (int i = 0; i < 1000; ++i)
    {
        auto const x = a.next();
        auto const y = b.next();
        CHECK(x.sr_gain == y.sr_gain);
        CHECK(x.rd_norm == y.rd_norm);
        CHECK(x.sr_gain.size() == 4);
        CHECK(x.rd_norm.size() == 4);
        CHECK(std::all_of(x.sr_gain.begin(), x.sr_gain.end(), [](double v) { return v >= 0; }));
        CHECK(std::all_of(x.rd_norm.begin(), x.rd_norm.end(), [](double v) { return v >= 0; }));
    }
    CHECK(a.slot() == 1000);
    FadingStream c(cfg, 99, 500);
    CHECK(c.next().sr_gain == sample_state(99, 500, cfg).sr_gain);
}

TEST_CASE("lag-1 autocorrelation across slots is negligible")
{
    ChannelConfig const cfg(4, 2, 3);
    std::size_t const n = 100'000;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        auto const s = sample_state(5, i, cfg);
        x[i] = s.sr_gain[0];
        y[i] = s.sr_gain[1];
    }
    auto corr = [&](auto const& a, auto const& b, std::size_t lag) {
        double ma = 0, mb = 0;
        std::size_t const m = n - lag;
        for (std::size_t i = 0; i < m; ++i)
        {
            ma += a[i];
            mb += b[i + lag];
        }
        ma /= m;
        mb /= m;
        double sab = 0, saa = 0, sbb = 0;
        for (std::size_t i = 0; i < m; ++i)
        {
            sab += (a[i] - ma) * (b[i + lag] - mb);
            saa += (a[i] - ma) * (a[i] - ma);
            sbb += (b[i + lag] - mb) * (b[i + lag] - mb);
        }
        return sab / std::sqrt(saa * sbb);
    };
    CHECK(std::fabs(corr(x, x, 1)) <= 0.01);
    CHECK(std::fabs(corr(x, y, 0)) <= 0.01);
}

//---------------------------------------------------------------------------//
TEST_CASE("Erlang CDF")
{
    CHECK(erlang_cdf(0, 3, 1) == 0.0);
    CHECK(erlang_cdf(2, 1, 1) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK(erlang_cdf(2, 2, 1) == doctest::Approx(0.264241).epsilon(1e-6));
    CHECK_THROWS_AS(erlang_cdf(-1, 1, 1), DomainError);
    for (int shape : {1, 3, 7, 30})
    {
        for (double t : {0.1, 1.0, 5.0, 40.0, 300.0})
        {
            double const expected = boost::math::gamma_p(double(shape), t / 2.0);
            CHECK(erlang_cdf(t, shape, 1.0) == doctest::Approx(expected).epsilon(1e-12));
            CHECK(erlang_survival(t, shape, 1.0)
                  == doctest::Approx(boost::math::gamma_q(double(shape), t / 2.0)).epsilon(1e-12));
        }
    }
}

TEST_CASE("min-of-Erlang CDF")
{
    CHECK(min_erlang_cdf(0, 2, 3, 1) == 0.0);
    CHECK(min_erlang_cdf(1, 2, 1, 1) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK_THROWS_AS(min_erlang_cdf(-0.5, 2, 3, 1), DomainError);

    // Empirical CDF over 10^7 sampled pairs from an unrelated generator
    std::mt19937_64 gen(2024);
    std::gamma_distribution<double> erlang3(3.0, 2.0);
    std::size_t const n = 10'000'000;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        hits += std::min(erlang3(gen), erlang3(gen)) <= 4.0;
    double const p_hat = double(hits) / n;
    double const p = min_erlang_cdf(4, 2, 3, 1);
    double const se = std::sqrt(p * (1 - p) / n);
    CHECK(std::fabs(p_hat - p) <= 3 * se);
}

TEST_CASE("empirical min-of-group CDF lies in the DKW band")
{
    ChannelConfig const cfg(4, 2, 3);
    std::size_t const n = 1'000'000;
    std::vector<double> mins(n);
    NetworkState s;
    for (std::size_t i = 0; i < n; ++i)
    {
        sample_state(11, i, cfg, s);
        mins[i] = std::min(s.sr_gain[0], s.sr_gain[1]);
    }
    std::sort(mins.begin(), mins.end());
    double const band = std::sqrt(std::log(2 / 0.01) / (2.0 * n));
    for (int k = 1; k <= 20; ++k)
    {
        double const z = 0.6 * k;
        double const emp = double(std::upper_bound(mins.begin(), mins.end(), z) - mins.begin()) / n;
        CAPTURE(z);
        CHECK(std::fabs(emp - min_erlang_cdf(z, 2, 3, 1)) <= band);
    }
}

//---------------------------------------------------------------------------//
TEST_CASE("amplitude-sum density")
{
    CHECK_THROWS_AS(nakagami_sum_pdf(-1, 1, 1, 1), DomainError);
    CHECK(nakagami_sum_pdf(0, 2, 2, 1) == 0.0);

    SUBCASE("single relay is the exact Nakagami law")
    {
        for (int shape : {1, 2, 5})
        {
            boost::math::gamma_distribution<double> gain(shape, 2.0 * 1.3);
            for (double z : {0.1, 0.8, 2.0, 4.5})
            {
                double const exact = 2 * z * boost::math::pdf(gain, z * z);
                CHECK(nakagami_sum_pdf(z, 1, shape, 1.3) == doctest::Approx(exact).epsilon(1e-12));
            }
        }
    }

    SUBCASE("normalization")
    {
        boost::math::quadrature::exp_sinh<double> integrator;
        for (int group : {1, 2, 3})
        {
            for (int shape : {1, 2, 3})
            {
                double const total = integrator.integrate(
                    [&](double z) { return nakagami_sum_pdf(z, group, shape, 1.0); });
                CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
            }
        }
    }

    SUBCASE("second-moment gap of the moment-matched model")
    {
        boost::math::quadrature::exp_sinh<double> integrator;
        double const model = integrator.integrate(
            [](double z) { return z * z * nakagami_sum_pdf(z, 2, 1, 1.0); });
        CHECK(model == doctest::Approx(8.0).epsilon(1e-8));

        // E[(s1 + s2)^2] with s_i Rayleigh, E s_i^2 = 2: 4 + pi
        ChannelConfig const cfg(2, 1, 1);
        std::size_t const n = 10'000'000;
        NetworkState s;
        auto m = sample_moments(n, [&](std::size_t i) {
            sample_state(13, i, cfg, s);
            double const a = s.rd_norm[0] + s.rd_norm[1];
            return a * a;
        });
        CHECK(std::fabs(m.mean - (4 + std::numbers::pi)) <= 3 * m.se);
        double const gap = (model - m.mean) / m.mean;
        CHECK(gap == doctest::Approx(0.12).epsilon(0.02));
    }
}

TEST_CASE("amplitude-sum CDF")
{
    CHECK(nakagami_sum_cdf(0, 2, 2, 1) == 0.0);
    CHECK(nakagami_sum_cdf(std::sqrt(2.0), 1, 1, 1) == doctest::Approx(0.632121).epsilon(1e-6));
    CHECK_THROWS_AS(nakagami_sum_cdf(-1, 1, 1, 1), DomainError);

    for (int group : {1, 2, 3})
    {
        for (int shape : {1, 3})
        {
            for (double z = 0.5; z < 12; z += 0.5)
            {
                double const h = 1e-5 * z;
                double const fd = (nakagami_sum_cdf(z + h, group, shape, 1.0)
                                   - nakagami_sum_cdf(z - h, group, shape, 1.0))
                                  / (2 * h);
                double const pdf = nakagami_sum_pdf(z, group, shape, 1.0);
                CAPTURE(group);
                CAPTURE(shape);
                CAPTURE(z);
                if (pdf > 1e-6)
                    CHECK(fd == doctest::Approx(pdf).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("CDFs are monotone and bounded")
{
    for (int shape : {1, 2, 4})
    {
        for (int group : {1, 2, 3})
        {
            double prev[3] = {0, 0, 0};
            for (double z = 0; z < 60; z += 0.05)
            {
                double const v[3] = {erlang_cdf(z, shape, 1.0),
                                     min_erlang_cdf(z, group, shape, 1.0),
                                     nakagami_sum_cdf(z, group, shape, 1.0)};
                for (int k = 0; k < 3; ++k)
                {
                    CHECK(v[k] >= prev[k]);
                    CHECK((v[k] >= 0 && v[k] <= 1));
                    prev[k] = v[k];
                }
            }
        }
    }
}
