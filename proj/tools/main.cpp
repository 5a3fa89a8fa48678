#include <iostream>

#include "stochmatch/cli.hpp"

int main(int argc, char** argv) {
  return stochmatch::run_cli(argc, argv, std::cout, std::cerr);
}
