#include <iostream>
#include <string>
#include <vector>

#include "fwi/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fwi::cli::Run(args, std::cout, std::cerr);
}
