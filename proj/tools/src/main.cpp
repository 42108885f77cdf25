#include "plateslip_cli/cli.hpp"

int main(int argc, char** argv) { return plateslip::cli::run_cli(argc, argv); }
