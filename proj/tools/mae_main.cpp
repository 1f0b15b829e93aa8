#include <iostream>

#include "mae/cli.hpp"

int main(int argc, char** argv) { return mae::run_cli(argc, argv, std::cout, std::cerr); }
