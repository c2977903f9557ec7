#include "hocs/cli.hpp"

int main(int argc, char** argv) { return hocs::cli::run_cli(argc, argv); }
