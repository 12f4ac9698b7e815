// Copyright 2026 The QFL-FHE Authors
// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "qfl/cli/commands.hpp"

int main(int argc, char** argv) { return qfl::cli::run_cli(argc, argv, std::cout, std::cerr); }
