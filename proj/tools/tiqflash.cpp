#include <iostream>

#include "tiqflash/cli.hpp"

int main(int argc, char** argv) {
    return tiqflash::cli::run(argc, argv, std::cout, std::cerr);
}
