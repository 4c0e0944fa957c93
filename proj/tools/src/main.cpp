#include <iostream>

#include "mnp_cli/cli.hpp"

int main(int argc, char** argv) { return mnp::cli::run_cli(argc, argv, std::cout, std::cerr); }
