#include "autotune/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return autotune::run_cli(argc, argv, std::cout, std::cerr);
}
