#include <iostream>

#include "multippl/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto outcome = multippl::cli::main(args);
  std::cout << outcome.out;
  std::cerr << outcome.err;
  return outcome.code;
}
