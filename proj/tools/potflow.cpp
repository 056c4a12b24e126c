#include "potflow/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return potflow::run_cli(argc, argv, std::cout, std::cerr); }
