#include "crepair/cli.hpp"

int main(int argc, char** argv) { return crepair::cli::run(argc, argv); }
