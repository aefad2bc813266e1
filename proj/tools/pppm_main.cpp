#include <iostream>

#include "pppm/cli.hpp"

int main(int argc, char **argv) { return pppm::run_cli(argc, argv, std::cout, std::cerr); }
