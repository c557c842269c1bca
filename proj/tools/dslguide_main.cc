/*!
 *  Copyright (c) 2026 by Contributors
 * \file dslguide_main.cc
 */
#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return dslguide::harness::RunCli(argc, argv, std::cout, std::cerr, std::cin);
}
