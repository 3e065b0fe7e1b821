#include "commands.hpp"

int main(int argc, char** argv) { return passive_rl::cli::run_cli(argc, argv); }
