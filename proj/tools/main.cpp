#include <string>
#include <vector>

#include "scryptforge_cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return scryptforge::cli::run(args);
}
