#include <iostream>

#include "mines/cli.hpp"

int main(int argc, char** argv) { return mines::run_cli(argc, argv, std::cout, std::cerr); }
