#include <iostream>
#include <string>
#include <vector>

#include "saftea/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return saftea::cli::run(args, std::cout, std::cerr);
}
