#include "crnsign/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return crnsign::cli::run(argc, argv, std::cout, std::cerr); }
