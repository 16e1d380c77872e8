#include <iostream>

#include "zerolab/cli.h"

int main(int argc, char** argv) {
  return zerolab::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
