#include <iostream>
#include <string>
#include <vector>

#include "fwipm/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fwipm::run_cli(args, std::cin, std::cout, std::cerr);
}
