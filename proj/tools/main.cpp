#include <string>
#include <vector>

#include "pasmin/cli.hpp"

int main(int argc, char** argv) {
  return pasmin::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
