// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <span>
#include <vector>

namespace relaylab
{
//---------------------------------------------------------------------------//
// Exponential integrals
//---------------------------------------------------------------------------//

//! E1(x) = int_x^inf e^-t / t dt, for x > 0.
double exp_integral_e1(double x);

//! e^x * E1(x), computed without forming e^x for large x.
double exp_scaled_e1(double x);

/*!
 * e^x * E_n(x) for integer order n >= 1 and x > 0.
 *
 * E_n(x) = int_1^inf e^{-x t} / t^n dt. Used to evaluate the moments
 * int_0^inf y^k e^-y / (y + a) dy = k! e^a E_{k+1}(a), which are positive and
 * need no cancelling sums.
 */
double exp_scaled_en(int n, double x);

//---------------------------------------------------------------------------//
// Factorials and multinomials
//---------------------------------------------------------------------------//

//! ln(n!); exact integer product for n <= 20, log-gamma above.
double log_factorial(int n);

/*!
 * A tuple of non-negative integers (n_1, ..., n_k) with a fixed sum.
 */
struct Composition
{
    std::vector<int> parts;

    int total() const;
    bool operator==(Composition const&) const = default;
};

/*!
 * Visit every composition of `total` into `parts` non-negative integers.
 *
 * Order is colexicographic: (total, 0, ..., 0) first and (0, ..., 0, total)
 * last, so the rightmost part varies slowest. The visitor receives a view
 * of the current tuple that is only valid during the call.
 */
void for_each_composition(int total,
                          int parts,
                          std::function<void(std::span<int const>)> const& visit);

//! All compositions in colexicographic order.
std::vector<Composition> compositions(int total, int parts);

//! Number of compositions, C(total + parts - 1, parts - 1).
double composition_count(int total, int parts);

//! ln of the multinomial coefficient total! / (n_1! ... n_k!).
double log_multinomial(int total, std::span<int const> parts);
double log_multinomial(int total, Composition const& c);

//---------------------------------------------------------------------------//
// Summation
//---------------------------------------------------------------------------//

/*!
 * A term stored as sign * exp(log_magnitude).
 */
struct SignedLogTerm
{
    double log_magnitude;
    int sign;  // +1, -1, or 0 for an exact zero
};

/*!
 * Result of summing signed log-space terms.
 *
 * `condition` is sum|t_i| / |sum t_i|, the factor by which rounding in the
 * individual terms is amplified in the result.
 */
struct SignedSum
{
    double value;
    double condition;
};

//! Sum terms from smallest to largest magnitude with Neumaier compensation.
SignedSum sum_signed_log_terms(std::vector<SignedLogTerm> terms);

}  // namespace relaylab
