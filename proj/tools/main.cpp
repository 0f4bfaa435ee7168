#include <iostream>
#include <vector>

#include "modkcsp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return modkcsp::run(args, std::cout, std::cerr);
}
