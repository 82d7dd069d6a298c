#include "pkirch/cli.hpp"

int main(int argc, char** argv) { return pkirch::cli::run_command(argc, argv); }
