#include "linklab/cli.hpp"

int main(int argc, char** argv) { return linklab::run_command(argc, argv); }
