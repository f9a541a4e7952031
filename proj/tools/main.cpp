#include <iostream>

#include "isinglb/cli.hpp"

int main(int argc, char** argv) { return isinglb::cli_main(argc, argv, std::cout, std::cerr); }
