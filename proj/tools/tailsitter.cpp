#include <iostream>

#include "tailsitter/cli.hpp"

int main(int argc, char** argv) { return tailsitter::cli_main(argc, argv, std::cout, std::cerr); }
