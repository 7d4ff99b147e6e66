#include <iostream>

#include "vinobs_cli/cli.hpp"

int main(int argc, char** argv) { return vinobs::cli_main(argc, argv, std::cout, std::cerr); }
