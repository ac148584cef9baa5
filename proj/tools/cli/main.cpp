#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lurelab::cli::run(argc, argv, std::cout, std::cerr); }
