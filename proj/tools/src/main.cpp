#include <iostream>

#include "permmap/cli/commands.hpp"

int main(int argc, char** argv) { return permmap::cli::run(argc, argv, std::cout, std::cerr); }
