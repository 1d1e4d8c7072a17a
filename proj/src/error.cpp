// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include "modred/error.hpp"

namespace modred
{

namespace
{

std::string compose(const std::string &code, const std::string &detail)
{
  return detail.empty() ? code : code + ": " + detail;
}

}  // namespace

Error::Error(std::string code, const std::string &detail, double value)
  : std::runtime_error(compose(code, detail)), code_(std::move(code)), value_(value)
{
}

}  // namespace modred
