#include <iostream>
#include <string>
#include <vector>

#include "linkfold/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return linkfold::cli::run(args, std::cout, std::cerr);
}
