#include <iostream>

#include "coarselab/cli.hpp"

int main(int argc, char** argv) { return coarselab::run_cli(argc, argv, std::cout, std::cerr); }
