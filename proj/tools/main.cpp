#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return misinfo::cli::run(argc, argv, std::cout, std::cerr); }
