#include "tripmatch/harness/cli.hpp"

int main(int argc, char** argv) { return tripmatch::harness::run_cli(argc, argv); }
