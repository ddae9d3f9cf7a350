#include "fpo/cli.hpp"

int main(int argc, char** argv) { return fpo::run_cli(argc, argv); }
