#include <iostream>
#include <string>
#include <vector>

#include "edgeib/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return edgeib::run_cli(args, std::cout, std::cerr);
}
