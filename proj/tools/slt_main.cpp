#include <iostream>

#include "slt/cli.hpp"

int main(int argc, char** argv) {
  return slt::cli_main(argc, argv, std::cout, std::cerr);
}
