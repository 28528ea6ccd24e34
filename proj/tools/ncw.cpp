// SPDX-License-Identifier: Apache-2.0
#include <iostream>

#include "ncw/harness.hpp"

int main(int argc, char** argv) { return ncw::harness::run_cli(argc, argv, std::cout, std::cerr); }
