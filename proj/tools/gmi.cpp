#include <iostream>

#include "gmi/cli.hpp"

int main(int argc, char** argv) { return gmi::cli::run(argc, argv, std::cout, std::cerr); }
