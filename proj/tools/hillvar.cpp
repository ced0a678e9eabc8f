#include <iostream>
#include <string>
#include <vector>

#include "hillvar/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return hillvar::run_cli(args, std::cout, std::cerr);
}
