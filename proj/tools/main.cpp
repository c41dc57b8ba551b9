#include <iostream>
#include <string>
#include <vector>

#include "epsweep/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return epsweep::run_cli(args, std::cout, std::cerr);
}
