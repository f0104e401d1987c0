#include <string>
#include <vector>

#include "phaserec/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return phaserec::run_cli(std::move(args));
}
