#include <iostream>

#include "idinf/cli.hpp"

int main(int argc, char** argv) { return idinf::run_cli(argc, argv, std::cout, std::cerr); }
