#include <iostream>

#include "paracr/cli.hpp"

int main(int argc, char** argv) { return paracr::cli::run(argc, argv, std::cout, std::cerr); }
