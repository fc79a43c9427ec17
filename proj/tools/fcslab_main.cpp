#include "fcslab/cli.hpp"

int main(int argc, char** argv) { return fcslab::run_cli(argc, argv); }
