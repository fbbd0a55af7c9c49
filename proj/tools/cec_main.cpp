#include <iostream>

#include "cec/cli/run_cli.hpp"

int main(int argc, char** argv) { return cec::cli::run_cli(argc, argv, std::cout, std::cerr); }
