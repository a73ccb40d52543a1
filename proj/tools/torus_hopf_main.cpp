#include <iostream>

#include "torushopf/cli.hpp"

int main(int argc, char** argv) {
  return torushopf::run_cli(argc, argv, std::cout, std::cerr);
}
