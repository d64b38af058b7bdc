#include <nidsbench/bench/cli.hpp>

int main(int argc, char** argv) { return nidsbench::run_cli(argc, argv); }
