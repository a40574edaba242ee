// Copyright Contributors to the spikedeblur project
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <string>
#include <vector>

#include "cli.hpp"

int main(int argc, char **argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return spikedeblur::cli::run(args, std::cout, std::cerr);
}
