#include "ucaprio/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ucaprio::cli::run(argc, argv, std::cout, std::cerr); }
