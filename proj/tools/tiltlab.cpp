#include "tiltlab/cli.hpp"

int main(int argc, char** argv) { return tiltlab::main_entry(argc, argv); }
