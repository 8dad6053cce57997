#include "ktree_cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ktree::cli::run(argc, argv, std::cout, std::cerr); }
