#include <iostream>

#include "skomap/cli.hpp"

int main(int argc, char** argv) {
    return skomap::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
