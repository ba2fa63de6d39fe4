#include "ioqfr/cli.hpp"

int main(int argc, char** argv) { return ioqfr::cli::run(argc, argv); }
