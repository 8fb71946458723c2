// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#include "relaylab/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "relaylab/errors.hpp"

namespace relaylab
{
namespace
{
constexpr double euler_gamma = 0.57721566490153286060651209008240243;
constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double tiny = 1e-300;
constexpr int max_iterations = 100000;

void check_argument(double x, char const* fname)
{
    if (!(x > 0))
    {
        throw DomainError(std::string(fname) + ": argument must be positive, got "
                          + std::to_string(x));
    }
}

// Power series for E_n(x), valid and accurate for 0 < x <= 1.
double en_series(int n, double x)
{
    int const nm1 = n - 1;
    double result = (nm1 != 0) ? 1.0 / nm1 : -std::log(x) - euler_gamma;
    double fact = 1.0;
    for (int i = 1; i < max_iterations; ++i)
    {
        fact *= -x / i;
        double delta;
        if (i != nm1)
        {
            delta = -fact / (i - nm1);
        }
        else
        {
            double psi = -euler_gamma;
            for (int k = 1; k <= nm1; ++k)
                psi += 1.0 / k;
            delta = fact * (-std::log(x) + psi);
        }
        result += delta;
        if (std::fabs(delta) < std::fabs(result) * eps)
            return result;
    }
    throw NumericalError("E_n power series failed to converge");
}

// Modified Lentz evaluation of the continued fraction for e^x E_n(x), x > 1.
double en_scaled_fraction(int n, double x)
{
    int const nm1 = n - 1;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iterations; ++i)
    {
        double const an = -static_cast<double>(i) * (nm1 + i);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        double const delta = c * d;
        h *= delta;
        if (std::fabs(delta - 1.0) < eps)
            return h;
    }
    throw NumericalError("E_n continued fraction failed to converge");
}
}  // namespace

//---------------------------------------------------------------------------//
double exp_integral_e1(double x)
{
    check_argument(x, "exp_integral_e1");
    if (std::isinf(x))
        return 0.0;
    if (x <= 1.0)
        return en_series(1, x);
    return en_scaled_fraction(1, x) * std::exp(-x);
}

double exp_scaled_e1(double x)
{
    return exp_scaled_en(1, x);
}

double exp_scaled_en(int n, double x)
{
    check_argument(x, "exp_scaled_en");
    if (n < 1)
        throw DomainError("exp_scaled_en: order must be >= 1");
    if (std::isinf(x))
        return 0.0;
    if (x <= 1.0)
        return std::exp(x) * en_series(n, x);
    return en_scaled_fraction(n, x);
}

//---------------------------------------------------------------------------//
double log_factorial(int n)
{
    static std::array<double, 21> const table = [] {
        std::array<double, 21> t{};
        std::uint64_t f = 1;
        for (int k = 0; k <= 20; ++k)
        {
            if (k > 0)
                f *= static_cast<std::uint64_t>(k);
            t[k] = std::log(static_cast<double>(f));
        }
        return t;
    }();
    if (n < 0)
        throw DomainError("log_factorial: negative argument");
    if (n <= 20)
        return table[n];
    return std::lgamma(static_cast<double>(n) + 1.0);
}

//---------------------------------------------------------------------------//
int Composition::total() const
{
    return std::accumulate(parts.begin(), parts.end(), 0);
}

void for_each_composition(int total,
                          int parts,
                          std::function<void(std::span<int const>)> const& visit)
{
    if (parts < 1)
        throw ConfigError("compositions: need at least one part");
    if (total < 0)
        throw ConfigError("compositions: total must be non-negative");

    std::vector<int> c(parts, 0);
    c[0] = total;
    while (true)
    {
        visit(std::span<int const>(c));
        // Colex successor: move one unit from the first non-empty part to
        // its right neighbour and return the remainder to the front.
        int i = 0;
        while (i < parts && c[i] == 0)
            ++i;
        if (i >= parts - 1)
            return;
        int const v = c[i];
        c[i] = 0;
        c[0] = v - 1;
        c[i + 1] += 1;
    }
}

std::vector<Composition> compositions(int total, int parts)
{
    std::vector<Composition> result;
    for_each_composition(total, parts, [&](std::span<int const> c) {
        result.push_back(Composition{std::vector<int>(c.begin(), c.end())});
    });
    return result;
}

double composition_count(int total, int parts)
{
    if (parts < 1 || total < 0)
        throw ConfigError("composition_count: invalid arguments");
    return std::round(std::exp(log_factorial(total + parts - 1)
                               - log_factorial(parts - 1) - log_factorial(total)));
}

double log_multinomial(int total, std::span<int const> parts)
{
    double result = log_factorial(total);
    int sum = 0;
    for (int n : parts)
    {
        if (n < 0)
            throw ConfigError("log_multinomial: negative part");
        sum += n;
        result -= log_factorial(n);
    }
    if (sum != total)
    {
        throw ConfigError("log_multinomial: parts sum to " + std::to_string(sum)
                          + ", expected " + std::to_string(total));
    }
    return result;
}

double log_multinomial(int total, Composition const& c)
{
    return log_multinomial(total, std::span<int const>(c.parts));
}

//---------------------------------------------------------------------------//
SignedSum sum_signed_log_terms(std::vector<SignedLogTerm> terms)
{
    std::erase_if(terms, [](SignedLogTerm const& t) { return t.sign == 0; });
    if (terms.empty())
        return {0.0, 1.0};

    double const scale
        = std::max_element(terms.begin(), terms.end(), [](auto const& a, auto const& b) {
              return a.log_magnitude < b.log_magnitude;
          })->log_magnitude;

    std::sort(terms.begin(), terms.end(), [](auto const& a, auto const& b) {
        return a.log_magnitude < b.log_magnitude;
    });

    double sum = 0.0;
    double compensation = 0.0;
    double abs_sum = 0.0;
    for (auto const& t : terms)
    {
        double const v = t.sign * std::exp(t.log_magnitude - scale);
        double const s = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            compensation += (sum - s) + v;
        else
            compensation += (v - s) + sum;
        sum = s;
        abs_sum += std::fabs(v);
    }
    sum += compensation;

    double const condition = (sum != 0.0) ? abs_sum / std::fabs(sum)
                                          : std::numeric_limits<double>::infinity();
    return {sum * std::exp(scale), condition};
}

}  // namespace relaylab
