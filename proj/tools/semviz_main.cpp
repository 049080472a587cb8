#include <iostream>

#include "semviz/cli.hpp"

int main(int argc, char** argv) {
  return semviz::cli::run(argc, argv, std::cout, std::cerr);
}
