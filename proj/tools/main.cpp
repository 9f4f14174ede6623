#include <iostream>
#include <string>
#include <vector>

#include "stablekit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return stablekit::run(args, std::cout, std::cerr);
}
