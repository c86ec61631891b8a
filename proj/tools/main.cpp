#include <iostream>
#include <string>
#include <vector>

#include "deconv/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return deconv::cli::run(args, std::cout, std::cerr);
}
