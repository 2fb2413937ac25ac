#include <iostream>

#include "ouhf/cli.hpp"

int main(int argc, char** argv) { return ouhf::cli::run(argc, argv, std::cout, std::cerr); }
