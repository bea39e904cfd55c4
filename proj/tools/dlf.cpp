#include <iostream>

#include "dlf/cli.hpp"

int main(int argc, char** argv) { return dlf::dispatch(argc, argv, std::cout, std::cerr); }
