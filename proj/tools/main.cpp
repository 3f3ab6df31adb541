#include <iostream>

#include "valcalc/cli.hpp"

int main(int argc, char** argv) {
  return valcalc::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
