// Copyright 2026 The nvthermo Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "nvthermo/cli.hpp"

int main(int argc, char** argv) { return nvthermo::run_cli(argc, argv, std::cout, std::cerr); }
