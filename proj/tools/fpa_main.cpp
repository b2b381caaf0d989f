#include "fpa/cli.hpp"

int main(int argc, char** argv) { return fpa::cli::main(argc, argv); }
