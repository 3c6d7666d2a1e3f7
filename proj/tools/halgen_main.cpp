/*
 * Copyright (c) 2026 halgen contributors
 *
 * SPDX-License-Identifier: Apache-2.0
 */
#include <iostream>
#include <string>
#include <vector>

#include "halgen/cli/commands.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return halgen::run_cli(args, std::cout, std::cerr);
}
