// SPDX-License-Identifier: MIT
#include "densim/cli.hpp"

int main(int argc, char** argv) { return densim::cli::run(argc, argv); }
