#include <iostream>

#include "fpp/harness.hpp"

int main(int argc, char** argv) { return fpp::cli_dispatch(argc, argv, std::cout, std::cerr); }
