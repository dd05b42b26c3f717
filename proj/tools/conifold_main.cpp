#include <string>
#include <vector>

#include "conifold/run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return conifold::cli_main(args);
}
