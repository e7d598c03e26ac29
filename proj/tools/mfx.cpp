#include <iostream>
#include <string>
#include <vector>

#include "mfx/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mfx::cli::run(args, std::cout, std::cerr);
}
