#include "relchron/cli.hpp"

int main(int argc, char** argv) { return relchron::cli::main_entry(argc, argv); }
