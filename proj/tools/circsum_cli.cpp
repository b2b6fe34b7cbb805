#include <iostream>

#include "circsum/cli.hpp"

int main(int argc, char** argv) { return circsum::cli::run(argc, argv, std::cout, std::cerr); }
