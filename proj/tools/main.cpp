#include <iostream>
#include <string>
#include <vector>

#include "boxlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return boxlab::run_cli(args, std::cout, std::cerr);
}
