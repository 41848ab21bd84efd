#include "vortex/cli.hpp"

int main(int argc, char** argv) { return vortex::run_cli(argc, argv); }
