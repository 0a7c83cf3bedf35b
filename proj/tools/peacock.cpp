#include <iostream>

#include "peacock/cli.hpp"

int main(int argc, char** argv) { return peacock::cli_main(argc, argv, std::cout, std::cerr); }
