#include <iostream>

#include "hiact/cli/commands.hpp"

int main(int argc, char** argv) { return hiact::cli::run(argc, argv, std::cout, std::cerr); }
