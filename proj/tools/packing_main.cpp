#include <iostream>

#include "packing/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return packing::cli::run(args, std::cout, std::cerr);
}
