#include <iostream>

#include "germs/cli.hpp"

#ifndef GERMS_DATA_DIR
#define GERMS_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
  return germs::cli::run_cli(argc, argv, std::cout, std::cerr, GERMS_DATA_DIR);
}
