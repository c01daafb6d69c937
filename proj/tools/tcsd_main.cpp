#include <string>
#include <vector>

#include "tcsd/cli.hpp"

int main(int argc, char** argv) {
  return tcsd::dispatch(std::vector<std::string>(argv + 1, argv + argc));
}
