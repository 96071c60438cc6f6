// hypermin command-line front end (subcommands wired up in cli.hpp).
#include "hypermin/cli.hpp"

int main(int argc, char** argv) { return hypermin::cli_main(argc, argv); }
