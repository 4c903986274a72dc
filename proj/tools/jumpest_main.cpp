#include <iostream>
#include <string>
#include <vector>

#include "jumpest/cli.hpp"

int main(int argc, char** argv) {
  return jumpest::parse_and_dispatch(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
