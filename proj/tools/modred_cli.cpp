// Copyright 2026 The modred Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "modred/cli.hpp"

int main(int argc, char **argv) { return modred::run_cli(argc, argv, std::cout, std::cerr); }
