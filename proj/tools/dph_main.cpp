#include "dph/cli.hpp"

int main(int argc, char** argv) { return dph::cli::run_cli(argc, argv); }
