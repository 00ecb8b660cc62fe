#include <iostream>

#include "hermrel/cli.hpp"

int main(int argc, char** argv) {
    return hermrel::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
