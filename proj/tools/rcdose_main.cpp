#include <iostream>

#include "rcdose/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rcdose::cli_dispatch(args, std::cout, std::cerr);
}
