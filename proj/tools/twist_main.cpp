#include "twist/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return twist::cli::run(argc, argv, std::cout, std::cerr); }
