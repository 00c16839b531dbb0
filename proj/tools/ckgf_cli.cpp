#include <iostream>

#include "ckgf/cli.hpp"

int main(int argc, char** argv) { return ckgf::cli::run(argc, argv, std::cout, std::cerr); }
