#include <iostream>

#include "l1pred/cli.hpp"

int main(int argc, char** argv) { return l1pred::cli::run(argc, argv, std::cout, std::cerr); }
