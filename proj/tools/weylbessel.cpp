#include "cli.hpp"

int main(int argc, char** argv) { return weylbessel::cli::run_cli(argc, argv); }
