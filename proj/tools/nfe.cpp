#include <iostream>
#include <string>
#include <vector>

#include "nfe/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return nfe::cli::run(args, std::cout, std::cerr);
}
