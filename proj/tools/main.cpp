#include <iostream>
#include <string>
#include <vector>

#include "chlab/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return chlab::cli::run(args, std::cout, std::cerr);
}
