#include <iostream>
#include <string>
#include <vector>

#include "litalk/cli.hpp"

int main(int argc, char** argv) {
  return litalk::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
