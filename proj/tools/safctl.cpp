#include <iostream>

#include "safctl/cli.hpp"

int main(int argc, char** argv) {
  return safctl::run_cli(argc, argv, std::cout, std::cerr);
}
