#include "crossimpact/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return crossimpact::cli::run(argc, argv, std::cout, std::cerr); }
