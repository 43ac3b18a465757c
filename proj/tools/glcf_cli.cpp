#include <iostream>
#include <string>
#include <vector>

#include "glcf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return glcf::run_command(args, std::cout, std::cerr);
}
