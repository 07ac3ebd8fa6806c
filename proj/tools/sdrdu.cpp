#include <iostream>

#include "sdrdu/cli.hpp"

int main(int argc, char** argv) { return sdrdu::cli::run(argc, argv, std::cout, std::cerr); }
