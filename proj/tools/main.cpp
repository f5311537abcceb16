#include <iostream>

#include "cryptospec/cli.hpp"

int main(int argc, char** argv) { return cryptospec::run(argc, argv, std::cout, std::cerr); }
