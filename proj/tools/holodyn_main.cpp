#include <iostream>

#include "holodyn/cli.hpp"

int main(int argc, char** argv) { return holodyn::cli::run(argc, argv, std::cout, std::cerr); }
