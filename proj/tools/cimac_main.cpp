#include <iostream>

#include "cimac/cli.hpp"

int main(int argc, char** argv) { return cimac::run_cli(argc, argv, std::cout, std::cerr); }
