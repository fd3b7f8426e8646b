#include <iostream>

#include "pmstar/cli.hpp"

int main(int argc, char** argv) {
  return pmstar::cli::main_entry(argc, argv, std::cout, std::cerr);
}
