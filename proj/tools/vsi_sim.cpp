#include <iostream>

#include "vsi/cli.hpp"

int main(int argc, char** argv) { return vsi::run_cli(argc, argv, std::cout, std::cerr); }
