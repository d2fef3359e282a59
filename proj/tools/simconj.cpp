#include <iostream>
#include <string>
#include <vector>

#include "simconj/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return simconj::run(args, std::cout);
}
