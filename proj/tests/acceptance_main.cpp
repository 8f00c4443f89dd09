#include "acceptance_suite.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    return run_acceptance(std::cout, only) == 0 ? 0 : 1;
}
