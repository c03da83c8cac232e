#include <iostream>

#include "vie/bench.hpp"

int main(int argc, char** argv) { return vie::bench::cli_main(argc, argv, std::cout, std::cerr); }
