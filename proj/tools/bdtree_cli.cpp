#include <iostream>
#include <string>
#include <vector>

#include "bdtree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return bdtree::run_cli(args, std::cout, std::cerr);
}
