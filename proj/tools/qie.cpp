#include <iostream>
#include <string>
#include <vector>

#include "qie/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qie::run_cli(args, std::cout, std::cerr);
}
