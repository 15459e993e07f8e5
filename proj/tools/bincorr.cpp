#include <iostream>
#include <string>
#include <vector>

#include "bincorr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bincorr::cli::run(args, std::cout, std::cerr);
}
