#include <iostream>

#include "linchk/cli.hpp"

int main(int argc, char** argv) { return linchk::run_cli(argc, argv, std::cout, std::cerr); }
