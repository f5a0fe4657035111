#include <iostream>

#include "l1lab/cli.hpp"

int main(int argc, char** argv) { return l1lab::cli::main_entry(argc, argv, std::cout, std::cerr); }
