#include <iostream>

#include "pbmc/cli.hpp"

int main(int argc, char** argv) { return pbmc::runCli(argc, argv, std::cout, std::cerr); }
