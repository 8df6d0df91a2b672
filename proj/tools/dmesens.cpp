#include <iostream>

#include "dme/cli.hpp"

int main(int argc, char** argv) { return dme::cli::main(argc, argv, std::cout, std::cerr); }
