#include <iostream>

#include "bb/cli.hpp"

int main(int argc, char** argv) { return bb::cli::run(argc, argv, std::cout, std::cerr); }
