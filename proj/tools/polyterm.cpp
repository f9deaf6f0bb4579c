#include <iostream>

#include "polyterm/cli.hpp"

int main(int argc, char** argv) { return polyterm::main_entry(argc, argv, std::cout, std::cerr); }
