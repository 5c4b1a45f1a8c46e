#include <iostream>
#include <string>
#include <vector>

#include "nsk/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return nsk::cli::run(args, std::cout, std::cerr).exit_code;
}
