#include <iostream>

#include "mdiqkd/cli.hpp"

int main(int argc, char** argv) {
  return mdiqkd::run_cli(argc, argv, std::cout, std::cerr);
}
