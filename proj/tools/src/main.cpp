#include <iostream>

#include "oscnorm_cli/cli.hpp"

int main(int argc, char** argv) { return oscnorm::cli::run(argc, argv, std::cout, std::cerr); }
