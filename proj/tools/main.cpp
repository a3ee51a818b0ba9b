#include <iostream>

#include "rowreorder/cli.hpp"

int main(int argc, char** argv) { return rowreorder::runCli(argc, argv, std::cout, std::cerr); }
