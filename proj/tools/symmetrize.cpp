#include "symm/cli.hpp"

int main(int argc, char** argv) { return symm::cli::run(argc, argv); }
