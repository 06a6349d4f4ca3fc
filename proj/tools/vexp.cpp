#include <iostream>
#include <string>
#include <vector>

#include "vexp/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return vexp::run_cli(args, std::cout, std::cerr);
}
