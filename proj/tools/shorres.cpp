#include <iostream>

#include "shorres/cli.hpp"

int main(int argc, char** argv) { return shorres::cli::run(argc, argv, std::cout, std::cerr); }
