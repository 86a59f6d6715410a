#include "densityk/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return densityk::cli::execute(args, std::cout, std::cerr);
}
