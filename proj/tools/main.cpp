#include <iostream>

#include "coopbandit/cli.hpp"

int main(int argc, char** argv) { return coopbandit::run_cli(argc, argv, std::cout, std::cerr); }
