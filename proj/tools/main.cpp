#include "multdim/cli_support.hpp"

int main(int argc, char** argv) { return multdim::run_cli(argc, argv); }
