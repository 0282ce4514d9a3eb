#include <iostream>
#include <vector>

#include "rw/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rw::cli_run(args, std::cout, std::cerr);
}
