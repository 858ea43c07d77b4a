#include <iostream>

#include "classweave/cli.hpp"

int main(int argc, char** argv) { return classweave::run_cli(argc, argv, std::cout, std::cerr); }
