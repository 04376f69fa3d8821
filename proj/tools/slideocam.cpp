#include <iostream>

#include "slideocam/io/commands.hpp"

int main(int argc, char** argv) {
    return slideocam::io::run_cli(argc, argv, std::cout, std::cerr);
}
