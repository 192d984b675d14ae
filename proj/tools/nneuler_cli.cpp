#include "nneuler/commands.hpp"

int main(int argc, char** argv) { return nneuler::run_cli(argc, argv); }
