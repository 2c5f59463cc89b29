#include <iostream>

#include "nlcavity/cli/scenario.hpp"

int main(int argc, char** argv) { return nlcavity::cli::run_cli(argc, argv, std::cout, std::cerr); }
