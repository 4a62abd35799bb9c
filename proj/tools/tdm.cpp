#include <iostream>

#include "tdm/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return tdm::cli::run(args, std::cout, std::cerr);
}
