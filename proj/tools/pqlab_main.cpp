#include <string>
#include <vector>

#include "pqlab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return pqlab::run_command(args);
}
