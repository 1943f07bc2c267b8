#include <iostream>

#include "heun/cli.hpp"

int main(int argc, char** argv) { return heun::cli::run_cli(argc, argv, std::cout, std::cerr); }
