#include "turbbench/cli/commands.hpp"

int main(int argc, char** argv) { return turbbench::run_cli(argc, argv); }
