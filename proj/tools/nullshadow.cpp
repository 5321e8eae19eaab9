#include <iostream>
#include <string>
#include <vector>

#include "nullshadow/cli.hpp"

int main(int argc, char** argv) {
    return nullshadow::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
