#include <iostream>

#include "tdlc_cli.hpp"

int main(int argc, char** argv) {
  return tdlc::cli::cli_main(argc, argv, std::cout, std::cerr);
}
