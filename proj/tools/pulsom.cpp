#include <iostream>

#include "pulsom/cli/commands.hpp"

int main(int argc, char** argv) { return pulsom::cli::run_cli(argc, argv, std::cout, std::cerr); }
