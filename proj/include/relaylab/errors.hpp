// Copyright 2026 The relaylab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace relaylab
{
//! Argument outside the mathematical domain of a function (x <= 0 for E1,
//! non-positive powers, infeasible budget splits).
class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

//! Invalid configuration or violated input contract.
class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

//! Non-finite or otherwise unusable numerical result.
class NumericalError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace relaylab
