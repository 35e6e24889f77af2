#include <iostream>
#include <string>
#include <vector>

#include "tcf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tcf::cli::run(args, std::cout, std::cerr);
}
