#include "propscore/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return propscore::cli::run(argc, argv, std::cout, std::cerr); }
