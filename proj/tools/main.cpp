#include "randboot/cli.hpp"

int main(int argc, char** argv) {
  return randboot::cli::main_entry(argc, argv);
}
