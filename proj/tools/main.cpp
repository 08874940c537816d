#include <iostream>
#include <string>
#include <vector>

#include "mbsc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mbsc::cli::run(args, std::cout, std::cerr);
}
