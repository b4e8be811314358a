#include <iostream>

#include "homogenlab/cli.hpp"

int main(int argc, char** argv) { return homogenlab::run_cli(argc, argv, std::cout, std::cerr); }
