#include <iostream>
#include <string>
#include <vector>

#include "flawsim/cli/dispatch.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flawsim::cli::dispatch(args, std::cout, std::cerr);
}
