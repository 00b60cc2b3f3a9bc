#include <iostream>

#include "dkf/cli.hpp"

int main(int argc, char** argv) { return dkf::cli::run(argc, argv, std::cout, std::cerr); }
