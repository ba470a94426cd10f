#include <iostream>
#include <string>
#include <vector>

#include "unsafe_audit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return unsafe_audit::run(args, std::cout, std::cerr);
}
