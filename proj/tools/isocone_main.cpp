#include <iostream>

#include "isocone/cli.hpp"

int main(int argc, char** argv) { return isocone::cli::run(argc, argv, std::cout, std::cerr); }
