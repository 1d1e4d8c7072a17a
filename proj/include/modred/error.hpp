// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef MODRED_ERROR_HPP
#define MODRED_ERROR_HPP

#include <limits>
#include <stdexcept>
#include <string>

namespace modred
{

// Every failure raised by the library carries a short machine-readable code
// ("eval-at-pole", "pf-diverged", ...) plus a human-readable detail. Some
// codes also carry a number: the condition estimate, the achieved rank, or
// the time at which a simulation blew up.
class Error : public std::runtime_error
{
public:
  Error(std::string code, const std::string &detail = {},
        double value = std::numeric_limits<double>::quiet_NaN());

  const std::string &code() const noexcept { return code_; }
  double value() const noexcept { return value_; }
  bool has_value() const noexcept { return value_ == value_; }

private:
  std::string code_;
  double value_;
};

}  // namespace modred

#endif  // MODRED_ERROR_HPP
